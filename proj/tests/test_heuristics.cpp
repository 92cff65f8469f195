#include <gtest/gtest.h>

#include <cfloat>
#include <random>

#include "numplan/heuristics.hpp"
#include "support/oracles.hpp"

using namespace numplan;

namespace {

NumExpr x(VarIndex i) { return NumExpr::var(i); }
NumExpr c(double v) { return NumExpr::constant(v); }

NumericTask task_with_goal(std::vector<bool> b, std::vector<double> n, GoalCondition g) {
  std::vector<std::string> bn, nn;
  for (std::size_t i = 0; i < b.size(); ++i) bn.push_back("b" + std::to_string(i));
  for (std::size_t i = 0; i < n.size(); ++i) nn.push_back("x" + std::to_string(i));
  return build_task(bn, nn, {}, State(std::move(b), std::move(n)), std::move(g));
}

// Per-condition error, summed independently of h_md.
double summed_error(const State& s, const NumericTask& t) {
  double total = 0;
  for (VarIndex i : t.goal().prop_literals) total += s.boolean(i) ? 0 : 1;
  for (const auto& cond : t.goal().num_conditions) {
    const double v = oracle::interpret(cond.expr, s.nums());
    const bool ok = cond.cmp == Comparator::GE ? v >= 0 : cond.cmp == Comparator::GT ? v > 0 : std::abs(v) <= 1e-6;
    if (!ok) total += v == 0 ? std::numeric_limits<double>::min() : std::abs(v);
  }
  return total;
}

}  // namespace

TEST(Blind, Values) {
  auto goal = task_with_goal({}, {5}, {{}, {{NumExpr::sub(x(0), c(5)), Comparator::GE}}});
  EXPECT_EQ(h_blind(goal.initial(), goal), 0);
  auto non = task_with_goal({}, {4}, {{}, {{NumExpr::sub(x(0), c(5)), Comparator::GE}}});
  EXPECT_EQ(h_blind(non.initial(), non), 1);
  auto empty = task_with_goal({false}, {4}, {});
  EXPECT_EQ(h_blind(empty.initial(), empty), 0);
}

TEST(GoalCount, Values) {
  auto t1 = task_with_goal({true}, {3}, {{0}, {{NumExpr::sub(x(0), c(5)), Comparator::GE}}});
  EXPECT_EQ(h_gc(t1.initial(), t1), 1);
  auto t2 = task_with_goal({true}, {6}, {{0}, {{NumExpr::sub(x(0), c(5)), Comparator::GE}}});
  EXPECT_EQ(h_gc(t2.initial(), t2), 0);
  auto t3 = task_with_goal({}, {0, 0},
                           {{}, {{NumExpr::sub(x(0), c(5)), Comparator::EQ}, {NumExpr::sub(x(1), c(2)), Comparator::GE}}});
  EXPECT_EQ(h_gc(t3.initial(), t3), 2);
}

TEST(GoalCount, EvaluationErrorIsDeadEnd) {
  auto t = task_with_goal({}, {0}, {{}, {{NumExpr::div(c(1), x(0)), Comparator::GE}}});
  EXPECT_TRUE(is_dead_end(h_gc(t.initial(), t)));
}

TEST(Manhattan, Values) {
  auto t1 = task_with_goal({}, {2}, {{}, {{NumExpr::sub(x(0), c(5)), Comparator::GE}}});
  EXPECT_EQ(h_md(t1.initial(), t1), 3);
  auto t2 = task_with_goal({false}, {2}, {{0}, {{NumExpr::sub(x(0), c(5)), Comparator::GE}}});
  EXPECT_EQ(h_md(t2.initial(), t2), 4);
  EXPECT_EQ(summed_error(t2.initial(), t2), 4);
  auto t3 = task_with_goal({true}, {7}, {{0}, {{NumExpr::sub(x(0), c(5)), Comparator::GE}}});
  EXPECT_EQ(h_md(t3.initial(), t3), 0);
}

TEST(Manhattan, EqualityErrorIsAbsolute) {
  auto t = task_with_goal({}, {8}, {{}, {{NumExpr::sub(x(0), c(5)), Comparator::EQ}}});
  EXPECT_EQ(h_md(t.initial(), t), 3);
}

TEST(Manhattan, StrictBoundaryIsPositive) {
  auto t = task_with_goal({}, {5}, {{}, {{NumExpr::sub(x(0), c(5)), Comparator::GT}}});
  const double h = h_md(t.initial(), t);
  EXPECT_GT(h, 0);
  EXPECT_EQ(h, DBL_MIN);
}

TEST(Manhattan, EvaluationErrorIsDeadEnd) {
  auto t = task_with_goal({}, {0}, {{}, {{NumExpr::div(c(1), x(0)), Comparator::GE}}});
  EXPECT_TRUE(is_dead_end(h_md(t.initial(), t)));
}

TEST(Manhattan, NonIncreasingUntilSatisfied) {
  auto t = task_with_goal({}, {0}, {{}, {{NumExpr::sub(x(0), c(10)), Comparator::GE}}});
  double prev = h_md(State({}, {-20}), t);
  for (double v = -19.5; v <= 20; v += 0.5) {
    const double h = h_md(State({}, {v}), t);
    EXPECT_LE(h, prev);
    if (v >= 10) {
      EXPECT_EQ(h, 0);
    }
    prev = h;
  }
}

TEST(GoalAwareness, RandomStates) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> v(0, 6);
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    const NumericTask t = oracle::random_micro_task(seed);
    for (int i = 0; i < 200; ++i) {
      const State s({v(rng) % 2 == 0, v(rng) % 2 == 0}, {double(v(rng)), double(v(rng))});
      const bool goal = satisfies_goal(s, t);
      EXPECT_EQ(h_md(s, t) == 0, goal);
      EXPECT_EQ(h_gc(s, t) == 0, goal);
      EXPECT_EQ(h_blind(s, t) == 0, goal);
      EXPECT_EQ(h_md(s, t), summed_error(s, t));
    }
  }
}

TEST(PropositionalGoals, ManhattanEqualsGoalCount) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> v(0, 6);
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    const NumericTask t = oracle::random_micro_task(seed, false);
    for (int i = 0; i < 100; ++i) {
      const State s({v(rng) % 2 == 0, v(rng) % 2 == 0}, {double(v(rng)), double(v(rng))});
      EXPECT_EQ(h_md(s, t), h_gc(s, t));
    }
  }
}

TEST(BaseHeuristicNames, RoundTrip) {
  for (auto h : {BaseHeuristic::Blind, BaseHeuristic::GoalCount, BaseHeuristic::Manhattan}) {
    EXPECT_EQ(parse_base_heuristic(to_string(h)), h);
  }
  EXPECT_FALSE(parse_base_heuristic("hadd"));
}
