#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "numplan/config.hpp"
#include "numplan/heuristics.hpp"
#include "numplan/model.hpp"
#include "numplan/novelty.hpp"
#include "numplan/semantics.hpp"

namespace numplan {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

// ---------------------------------------------------------------------------
// Budgets and results

enum class BudgetKind { Seconds, Evaluations, Expansions };

struct Budget {
  BudgetKind kind = BudgetKind::Seconds;
  double limit = 600.0;
  /// Stored-node cap standing in for a memory limit.
  std::size_t max_nodes = 20'000'000;

  static Budget seconds(double s) { return {BudgetKind::Seconds, s}; }
  static Budget evaluations(std::size_t n) { return {BudgetKind::Evaluations, static_cast<double>(n)}; }
  static Budget expansions(std::size_t n) { return {BudgetKind::Expansions, static_cast<double>(n)}; }
};

/// `60s`, `5000e` or `1000x` (expansions).
inline Budget parse_budget(std::string_view text) {
  if (text.size() < 2) throw Error(ErrorKind::InvalidConfig, "budget must look like 60s, 10000e or 500x");
  const char unit = text.back();
  const std::string number(text.substr(0, text.size() - 1));
  char* end = nullptr;
  const double v = std::strtod(number.c_str(), &end);
  if (end != number.c_str() + number.size() || !(v > 0) || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidConfig, "invalid budget '" + std::string(text) + "'");
  }
  switch (unit) {
    case 's': return Budget::seconds(v);
    case 'e': return Budget::evaluations(static_cast<std::size_t>(v));
    case 'x': return Budget::expansions(static_cast<std::size_t>(v));
    default: throw Error(ErrorKind::InvalidConfig, "budget unit must be s, e or x in '" + std::string(text) + "'");
  }
}

enum class SearchStatus { Solved, Exhausted, BudgetExceeded };

inline std::string_view to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Solved: return "solved";
    case SearchStatus::Exhausted: return "exhausted";
    case SearchStatus::BudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

struct ExpansionLogEntry {
  NodeId state;
  std::size_t queue;
  friend bool operator==(const ExpansionLogEntry&, const ExpansionLogEntry&) = default;
};

struct SearchResult {
  SearchStatus status = SearchStatus::Exhausted;
  std::optional<Plan> plan;
  std::size_t expansions = 0;
  std::size_t generated = 0;
  /// States evaluated (each state counts once however many evaluators ran).
  std::size_t evaluated_states = 0;
  /// Per evaluator, in declaration order.
  std::vector<std::size_t> evaluations;
  /// Base-heuristic computations actually performed (shared across queues).
  std::size_t base_computations = 0;
  std::size_t discarded_nonfinite = 0;
  std::size_t peak_nodes = 0;
  double wall_time_s = 0.0;
  std::vector<ExpansionLogEntry> expansion_log;

  bool solved() const { return status == SearchStatus::Solved; }
};

struct SearchOptions {
  EvalPolicy policy;
  bool log_expansions = false;
};

// ---------------------------------------------------------------------------
// Evaluators

/// Per-state cache of base-heuristic values, so a novelty heuristic and its
/// base share one computation.
class BaseValueCache {
 public:
  BaseValueCache(const NumericTask& task, const EvalPolicy& policy, std::size_t& counter)
      : task_(&task), policy_(&policy), counter_(&counter) {}

  void reset(const State& s) {
    state_ = &s;
    values_.fill(std::nullopt);
  }

  HeuristicValue get(BaseHeuristic h) {
    auto& slot = values_[static_cast<std::size_t>(h)];
    if (!slot) {
      slot = evaluate_base(h, *state_, *task_, *policy_);
      ++*counter_;
    }
    return *slot;
  }

 private:
  const NumericTask* task_;
  const EvalPolicy* policy_;
  std::size_t* counter_;
  const State* state_ = nullptr;
  std::array<std::optional<HeuristicValue>, 3> values_;
};

class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual HeuristicValue evaluate(const State& s, BaseValueCache& base) = 0;
  virtual std::string name() const = 0;
};

class BaseEvaluator final : public Evaluator {
 public:
  explicit BaseEvaluator(BaseHeuristic h) : h_(h) {}
  HeuristicValue evaluate(const State&, BaseValueCache& base) override { return base.get(h_); }
  std::string name() const override { return std::string(to_string(h_)); }

 private:
  BaseHeuristic h_;
};

class NoveltyEvaluator final : public Evaluator {
 public:
  NoveltyEvaluator(const NumericTask& task, NoveltyConfig cfg) : novelty_(task, cfg) {}
  HeuristicValue evaluate(const State& s, BaseValueCache& base) override {
    return novelty_.evaluate(s, base.get(novelty_.config().base));
  }
  std::string name() const override { return novelty_.config().to_string(); }

 private:
  NoveltyHeuristic novelty_;
};

inline std::vector<std::unique_ptr<Evaluator>> make_evaluators(const NumericTask& task,
                                                               std::span<const EvaluatorSpec> specs) {
  std::vector<std::unique_ptr<Evaluator>> out;
  for (const auto& spec : specs) {
    if (const auto* base = std::get_if<BaseHeuristic>(&spec)) {
      out.push_back(std::make_unique<BaseEvaluator>(*base));
    } else {
      out.push_back(std::make_unique<NoveltyEvaluator>(task, std::get<NoveltyConfig>(spec)));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Open list and search space

/// Min-priority queue; equal priorities pop in insertion order.
class OpenList {
 public:
  void push(HeuristicValue priority, std::uint64_t counter, NodeId node) { heap_.push({priority, counter, node}); }
  NodeId pop() {
    const NodeId n = heap_.top().node;
    heap_.pop();
    return n;
  }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  struct Entry {
    HeuristicValue priority;
    std::uint64_t counter;
    NodeId node;
    bool operator>(const Entry& o) const {
      return priority != o.priority ? priority > o.priority : counter > o.counter;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
};

struct SearchNode {
  State state;
  NodeId parent = kNoNode;
  ActionId action = 0;
  std::vector<HeuristicValue> h;
  bool expanded = false;
};

/// Every state generated so far, with parent pointers. A state id is its
/// position in generation order.
class SearchSpace {
 public:
  SearchSpace() : index_(16, IdHash{this}, IdEq{this}) {}
  SearchSpace(const SearchSpace&) = delete;
  SearchSpace& operator=(const SearchSpace&) = delete;

  /// Adds `s` unless an equal state exists; returns the new id or nullopt.
  std::optional<NodeId> insert(State s, NodeId parent, ActionId action) {
    nodes_.push_back({std::move(s), parent, action, {}, false});
    const auto id = static_cast<NodeId>(nodes_.size() - 1);
    if (!index_.insert(id).second) {
      nodes_.pop_back();
      return std::nullopt;
    }
    return id;
  }

  SearchNode& operator[](NodeId id) { return nodes_[id]; }
  const SearchNode& operator[](NodeId id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

  /// Actions along the parent chain, root first.
  Plan extract_plan(NodeId id) const {
    Plan plan;
    for (NodeId n = id; nodes_[n].parent != kNoNode; n = nodes_[n].parent) plan.actions.push_back(nodes_[n].action);
    std::reverse(plan.actions.begin(), plan.actions.end());
    return plan;
  }

 private:
  struct IdHash {
    const SearchSpace* space;
    std::size_t operator()(NodeId id) const { return space->nodes_[id].state.hash(); }
  };
  struct IdEq {
    const SearchSpace* space;
    bool operator()(NodeId a, NodeId b) const { return space->nodes_[a].state == space->nodes_[b].state; }
  };

  std::vector<SearchNode> nodes_;
  std::unordered_set<NodeId, IdHash, IdEq> index_;
};

// ---------------------------------------------------------------------------
// Greedy best-first search

namespace detail {

inline bool is_evaluation_error(const Error& e) {
  return e.kind() == ErrorKind::DivisionByZero || e.kind() == ErrorKind::NonFiniteResult ||
         e.kind() == ErrorKind::NonFiniteValue;
}

}  // namespace detail

/// GBFS with one open list per evaluator, popped round-robin. All queues
/// share one closed list and nothing is reopened. Goal test on generation.
inline SearchResult gbfs(const NumericTask& task, std::vector<std::unique_ptr<Evaluator>>& evaluators,
                         const Budget& budget, const SearchOptions& options = {}) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const std::size_t n_queues = evaluators.size();
  if (n_queues == 0) throw Error(ErrorKind::InvalidConfig, "search needs at least one evaluator");

  SearchResult result;
  result.evaluations.assign(n_queues, 0);
  SearchSpace space;
  std::vector<OpenList> open(n_queues);
  BaseValueCache cache(task, options.policy, result.base_computations);
  std::uint64_t counter = 0;

  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
  auto finish = [&](SearchStatus status) {
    result.status = status;
    result.peak_nodes = space.size();
    result.wall_time_s = elapsed();
    return result;
  };
  auto time_exceeded = [&] { return budget.kind == BudgetKind::Seconds && elapsed() >= budget.limit; };
  auto may_evaluate = [&] {
    if (budget.kind == BudgetKind::Evaluations && static_cast<double>(result.evaluated_states) >= budget.limit) {
      return false;
    }
    return !time_exceeded();
  };
  auto evaluate_and_push = [&](NodeId id) {
    SearchNode& node = space[id];
    cache.reset(node.state);
    node.h.resize(n_queues);
    ++result.evaluated_states;
    const std::uint64_t order = counter++;
    for (std::size_t q = 0; q < n_queues; ++q) {
      node.h[q] = evaluators[q]->evaluate(space[id].state, cache);
      ++result.evaluations[q];
      if (!is_dead_end(node.h[q])) open[q].push(node.h[q], order, id);
    }
  };

  const NodeId root = *space.insert(task.initial(), kNoNode, 0);
  bool root_goal = false;
  try {
    root_goal = satisfies_goal(task.initial(), task, options.policy);
  } catch (const Error& e) {
    if (!detail::is_evaluation_error(e)) throw;
  }
  if (root_goal) {
    result.plan = Plan{};
    return finish(SearchStatus::Solved);
  }
  if (!may_evaluate()) return finish(SearchStatus::BudgetExceeded);
  evaluate_and_push(root);

  std::size_t turn = 0;
  for (;;) {
    if (time_exceeded()) return finish(SearchStatus::BudgetExceeded);
    if (budget.kind == BudgetKind::Expansions && static_cast<double>(result.expansions) >= budget.limit) {
      return finish(SearchStatus::BudgetExceeded);
    }
    // Round-robin over queues; already-expanded entries are skipped without
    // using up the queue's turn.
    NodeId current = kNoNode;
    std::size_t from = 0;
    for (std::size_t attempt = 0; attempt < n_queues && current == kNoNode; ++attempt) {
      const std::size_t q = (turn + attempt) % n_queues;
      while (!open[q].empty()) {
        const NodeId id = open[q].pop();
        if (!space[id].expanded) {
          current = id;
          from = q;
          break;
        }
      }
    }
    if (current == kNoNode) return finish(SearchStatus::Exhausted);
    turn = (from + 1) % n_queues;

    space[current].expanded = true;
    ++result.expansions;
    if (options.log_expansions) result.expansion_log.push_back({current, from});

    const State parent_state = space[current].state;
    const auto& actions = task.actions();
    for (ActionId a = 0; a < actions.size(); ++a) {
      std::optional<State> next;
      try {
        next = apply(actions[a], parent_state, options.policy);
      } catch (const Error& e) {
        if (!detail::is_evaluation_error(e)) throw;
        ++result.discarded_nonfinite;
        continue;
      }
      if (!next) continue;
      ++result.generated;
      const auto id = space.insert(std::move(*next), current, a);
      if (!id) continue;
      if (space.size() > budget.max_nodes) return finish(SearchStatus::BudgetExceeded);
      bool goal = false;
      try {
        goal = satisfies_goal(space[*id].state, task, options.policy);
      } catch (const Error& e) {
        if (!detail::is_evaluation_error(e)) throw;
      }
      if (goal) {
        result.plan = space.extract_plan(*id);
        return finish(SearchStatus::Solved);
      }
      if (!may_evaluate()) return finish(SearchStatus::BudgetExceeded);
      evaluate_and_push(*id);
    }
  }
}

inline SearchResult gbfs(const NumericTask& task, std::span<const EvaluatorSpec> specs, const Budget& budget,
                         const SearchOptions& options = {}) {
  auto evaluators = make_evaluators(task, specs);
  return gbfs(task, evaluators, budget, options);
}

inline SearchResult solve(const NumericTask& task, const SolverConfig& config, const Budget& budget,
                          const SearchOptions& options = {}) {
  if (config.search == SearchKind::Gbfs && config.heuristics.size() != 1) {
    throw Error(ErrorKind::InvalidConfig, "gbfs takes exactly one heuristic");
  }
  return gbfs(task, config.heuristics, budget, options);
}

}  // namespace numplan
