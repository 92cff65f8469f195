#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "numplan/model.hpp"
#include "numplan/semantics.hpp"

namespace numplan {

/// Heuristic values are non-negative reals; +inf marks a dead end.
using HeuristicValue = double;
inline constexpr HeuristicValue kDeadEnd = std::numeric_limits<double>::infinity();

inline bool is_dead_end(HeuristicValue h) { return h == kDeadEnd; }

inline HeuristicValue h_blind(const State& s, const NumericTask& task, const EvalPolicy& p = {}) {
  try {
    return satisfies_goal(s, task, p) ? 0.0 : 1.0;
  } catch (const Error&) {
    return 1.0;
  }
}

/// Number of goal conditions (propositional and numeric) not satisfied in s.
inline HeuristicValue h_gc(const State& s, const NumericTask& task, const EvalPolicy& p = {}) {
  double unmet = 0.0;
  for (VarIndex i : task.goal().prop_literals) {
    if (!s.boolean(i)) unmet += 1.0;
  }
  try {
    for (const NumCondition& c : task.goal().num_conditions) {
      if (!holds(c, s, p)) unmet += 1.0;
    }
  } catch (const Error&) {
    return kDeadEnd;
  }
  return unmet;
}

/// Unsatisfied propositional goals plus, for every violated numeric goal
/// `ξ ⊵ 0`, the error |ξ(s)|.
inline HeuristicValue h_md(const State& s, const NumericTask& task, const EvalPolicy& p = {}) {
  double total = 0.0;
  for (VarIndex i : task.goal().prop_literals) {
    if (!s.boolean(i)) total += 1.0;
  }
  try {
    for (const NumCondition& c : task.goal().num_conditions) {
      const double v = eval_expr(c.expr, s);
      bool sat = false;
      switch (c.cmp) {
        case Comparator::GE: sat = v >= 0.0; break;
        case Comparator::GT: sat = v > 0.0; break;
        case Comparator::EQ: sat = std::abs(v) <= p.eq_tolerance; break;
      }
      // A violated `ξ > 0` at exactly ξ = 0 has error 0; count it as the
      // smallest positive value so h_md stays 0 only at goal states.
      if (!sat) total += v == 0.0 ? std::numeric_limits<double>::min() : std::abs(v);
    }
  } catch (const Error&) {
    return kDeadEnd;
  }
  return std::isfinite(total) ? total : kDeadEnd;
}

enum class BaseHeuristic { Blind, GoalCount, Manhattan };

inline std::string_view to_string(BaseHeuristic h) {
  switch (h) {
    case BaseHeuristic::Blind: return "blind";
    case BaseHeuristic::GoalCount: return "gc";
    case BaseHeuristic::Manhattan: return "md";
  }
  return "?";
}

inline std::optional<BaseHeuristic> parse_base_heuristic(std::string_view name) {
  if (name == "blind") return BaseHeuristic::Blind;
  if (name == "gc") return BaseHeuristic::GoalCount;
  if (name == "md") return BaseHeuristic::Manhattan;
  return std::nullopt;
}

inline HeuristicValue evaluate_base(BaseHeuristic h, const State& s, const NumericTask& task,
                                    const EvalPolicy& p = {}) {
  switch (h) {
    case BaseHeuristic::Blind: return h_blind(s, task, p);
    case BaseHeuristic::GoalCount: return h_gc(s, task, p);
    case BaseHeuristic::Manhattan: return h_md(s, task, p);
  }
  return kDeadEnd;
}

}  // namespace numplan
