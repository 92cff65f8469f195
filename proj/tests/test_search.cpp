#include <gtest/gtest.h>

#include <set>

#include "numplan/search.hpp"
#include "support/oracles.hpp"

using namespace numplan;

namespace {

NumExpr x(VarIndex i) { return NumExpr::var(i); }
NumExpr c(double v) { return NumExpr::constant(v); }

std::vector<EvaluatorSpec> md() { return {BaseHeuristic::Manhattan}; }

SearchOptions logged() {
  SearchOptions o;
  o.log_expansions = true;
  return o;
}

}  // namespace

TEST(Gbfs, GoalAtRoot) {
  NumericTask t = build_task({}, {"x"}, {}, State({}, {0.0}), {{}, {{x(0), Comparator::GE}}});
  SearchResult r = gbfs(t, md(), Budget::evaluations(100));
  EXPECT_EQ(r.status, SearchStatus::Solved);
  ASSERT_TRUE(r.plan);
  EXPECT_TRUE(r.plan->empty());
  EXPECT_EQ(r.expansions, 0u);
}

TEST(Gbfs, Chain) {
  NumericTask t = oracle::chain_task();
  SearchResult r = gbfs(t, md(), Budget::evaluations(100));
  ASSERT_EQ(r.status, SearchStatus::Solved);
  EXPECT_EQ(r.plan->size(), 3u);
  EXPECT_EQ(r.expansions, 3u);
  EXPECT_TRUE(validate_plan(t, *r.plan).valid);
}

TEST(Gbfs, Unsolvable) {
  NumericTask t = build_task({}, {"x"}, {}, State({}, {0.0}), {{}, {{NumExpr::sub(x(0), c(1)), Comparator::GE}}});
  SearchResult r = gbfs(t, md(), Budget::evaluations(100));
  EXPECT_EQ(r.status, SearchStatus::Exhausted);
  EXPECT_EQ(r.expansions, 1u);
  EXPECT_FALSE(r.plan);
}

TEST(Gbfs, BudgetExceeded) {
  NumericTask t = oracle::chain_task(1000);
  SearchResult by_evals = gbfs(t, md(), Budget::evaluations(10));
  EXPECT_EQ(by_evals.status, SearchStatus::BudgetExceeded);
  EXPECT_EQ(by_evals.evaluated_states, 10u);
  SearchResult by_exp = gbfs(t, md(), Budget::expansions(7));
  EXPECT_EQ(by_exp.status, SearchStatus::BudgetExceeded);
  EXPECT_EQ(by_exp.expansions, 7u);
  Budget nodes = Budget::evaluations(100000);
  nodes.max_nodes = 50;
  EXPECT_EQ(gbfs(t, md(), nodes).status, SearchStatus::BudgetExceeded);
}

TEST(Gbfs, ExtractPlanOrder) {
  // a then b then c, each enabled by the previous.
  GroundAction a{"a", {}, {}, {{0, true}}, {}};
  GroundAction b{"b", {0}, {}, {{1, true}}, {}};
  GroundAction cc{"c", {1}, {}, {{2, true}}, {}};
  NumericTask t = build_task({"p", "q", "r"}, {}, {cc, b, a}, State({false, false, false}, {}), {{2}, {}});
  SearchResult r = gbfs(t, std::vector<EvaluatorSpec>{BaseHeuristic::GoalCount}, Budget::evaluations(100));
  ASSERT_TRUE(r.solved());
  EXPECT_EQ(r.plan->actions, (std::vector<ActionId>{2, 1, 0}));
  EXPECT_TRUE(validate_plan(t, *r.plan).valid);
}

TEST(Gbfs, NonFiniteSuccessorsAreDiscarded) {
  GroundAction blow{"blow", {}, {}, {}, {{0, NumExpr::div(c(1), NumExpr::sub(x(0), x(0)))}}};
  GroundAction inc{"inc", {}, {}, {}, {{0, NumExpr::add(x(0), c(1))}}};
  NumericTask t = build_task({}, {"x"}, {blow, inc}, State({}, {0.0}),
                             {{}, {{NumExpr::sub(x(0), c(2)), Comparator::GE}}});
  SearchResult r = gbfs(t, md(), Budget::evaluations(100));
  ASSERT_TRUE(r.solved());
  EXPECT_EQ(r.discarded_nonfinite, 2u);
}

TEST(Gbfs, MatchesIndependentGbfs) {
  for (std::uint32_t seed = 0; seed < 30; ++seed) {
    SCOPED_TRACE(seed);
    const NumericTask t = oracle::random_micro_task(seed);
    auto oracle = oracle::mini_gbfs(t, [&](const std::vector<bool>& b, const std::vector<double>& n) {
      return h_md(State(b, n), t);
    });
    SearchResult r = gbfs(t, md(), Budget::evaluations(100000), logged());
    ASSERT_EQ(r.solved(), oracle.solved);
    std::vector<std::size_t> ids;
    for (const auto& e : r.expansion_log) ids.push_back(e.state);
    EXPECT_EQ(ids, oracle.expanded_ids);
    if (r.solved()) {
      EXPECT_EQ(r.plan->actions, oracle.plan);
    }
  }
}

TEST(MultiQueue, DuplicatedHeuristicEqualsSingleQueue) {
  for (std::uint32_t seed = 0; seed < 30; ++seed) {
    SCOPED_TRACE(seed);
    const NumericTask t = oracle::random_micro_task(seed);
    for (auto h : {BaseHeuristic::Manhattan, BaseHeuristic::GoalCount}) {
      SearchResult one = gbfs(t, std::vector<EvaluatorSpec>{h}, Budget::evaluations(100000), logged());
      SearchResult two = gbfs(t, std::vector<EvaluatorSpec>{h, h}, Budget::evaluations(100000), logged());
      ASSERT_EQ(one.expansion_log.size(), two.expansion_log.size());
      for (std::size_t i = 0; i < one.expansion_log.size(); ++i) {
        EXPECT_EQ(one.expansion_log[i].state, two.expansion_log[i].state);
      }
      EXPECT_EQ(one.plan.has_value(), two.plan.has_value());
      if (one.plan) {
        EXPECT_EQ(one.plan->actions, two.plan->actions);
      }
    }
  }
}

TEST(MultiQueue, RoundRobinAlternatesQueues) {
  const NumericTask t = oracle::chain_task(50);
  const NoveltyConfig nov{BaseHeuristic::Manhattan, NoveltyFeature::B, NoveltyMeasure::QB, 2};
  SearchResult r = gbfs(t, std::vector<EvaluatorSpec>{BaseHeuristic::Manhattan, nov}, Budget::evaluations(1000), logged());
  ASSERT_TRUE(r.solved());
  // A chain has one successor per state, so neither queue ever runs dry
  // before the other.
  for (std::size_t i = 0; i < r.expansion_log.size(); ++i) EXPECT_EQ(r.expansion_log[i].queue, i % 2);
}

TEST(MultiQueue, BaseValueSharedWithNovelty) {
  const NumericTask t = oracle::random_micro_task(3);
  const NoveltyConfig nov{BaseHeuristic::Manhattan, NoveltyFeature::B, NoveltyMeasure::QB, 2};
  SearchResult r = gbfs(t, std::vector<EvaluatorSpec>{BaseHeuristic::Manhattan, nov}, Budget::evaluations(5000));
  ASSERT_EQ(r.evaluations.size(), 2u);
  EXPECT_EQ(r.evaluations[0], r.evaluated_states);
  EXPECT_EQ(r.evaluations[1], r.evaluated_states);
  EXPECT_EQ(r.base_computations, r.evaluated_states);
}

TEST(SearchInvariants, NoStateExpandedTwice) {
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    const NumericTask t = oracle::random_micro_task(seed);
    for (const auto& specs : std::vector<std::vector<EvaluatorSpec>>{
             {BaseHeuristic::Manhattan},
             {BaseHeuristic::Blind},
             {BaseHeuristic::Manhattan, NoveltyConfig{BaseHeuristic::Manhattan, NoveltyFeature::A, NoveltyMeasure::PN, 2},
              BaseHeuristic::GoalCount}}) {
      SearchResult r = gbfs(t, specs, Budget::evaluations(100000), logged());
      std::set<NodeId> seen;
      for (const auto& e : r.expansion_log) EXPECT_TRUE(seen.insert(e.state).second);
      EXPECT_LE(r.expansions, r.peak_nodes);
      if (r.solved()) {
        EXPECT_TRUE(validate_plan(t, *r.plan).valid);
      }
      // Every stored node except unevaluated goal states was evaluated once.
      EXPECT_LE(r.evaluated_states, r.peak_nodes);
      EXPECT_GE(r.evaluated_states + 1, r.peak_nodes);
    }
  }
}

TEST(SearchInvariants, DeterministicInEvaluationMode) {
  const NumericTask t = oracle::random_micro_task(4);
  const NoveltyConfig nov{BaseHeuristic::Manhattan, NoveltyFeature::B, NoveltyMeasure::QB, 2};
  std::vector<EvaluatorSpec> specs{nov, BaseHeuristic::Manhattan};
  SearchResult a = gbfs(t, specs, Budget::evaluations(3000), logged());
  SearchResult b = gbfs(t, specs, Budget::evaluations(3000), logged());
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.expansions, b.expansions);
  EXPECT_EQ(a.generated, b.generated);
  EXPECT_EQ(a.evaluations, b.evaluations);
  EXPECT_EQ(a.expansion_log, b.expansion_log);
  EXPECT_EQ(a.plan.has_value(), b.plan.has_value());
  if (a.plan) {
    EXPECT_EQ(a.plan->actions, b.plan->actions);
  }
}

TEST(OpenList, FifoOnTies) {
  OpenList open;
  open.push(1.0, 0, 10);
  open.push(0.5, 1, 11);
  open.push(1.0, 2, 12);
  open.push(0.5, 3, 13);
  EXPECT_EQ(open.pop(), 11u);
  EXPECT_EQ(open.pop(), 13u);
  EXPECT_EQ(open.pop(), 10u);
  EXPECT_EQ(open.pop(), 12u);
  EXPECT_TRUE(open.empty());
}

TEST(Budget, Parsing) {
  EXPECT_EQ(parse_budget("60s").kind, BudgetKind::Seconds);
  EXPECT_EQ(parse_budget("60s").limit, 60);
  EXPECT_EQ(parse_budget("5000e").kind, BudgetKind::Evaluations);
  EXPECT_EQ(parse_budget("12x").kind, BudgetKind::Expansions);
  EXPECT_THROW(parse_budget("60"), Error);
  EXPECT_THROW(parse_budget("-5s"), Error);
  EXPECT_THROW(parse_budget("abc"), Error);
}
