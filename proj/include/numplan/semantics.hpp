#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "numplan/model.hpp"

namespace numplan {

/// Tolerance for `=` conditions only. State identity is always bit-exact.
struct EvalPolicy {
  double eq_tolerance = 1e-6;
};

inline double eval_expr(const NumExpr& e, const State& s) {
  double result = 0.0;
  switch (e.op()) {
    case ExprOp::Const: return e.value();
    case ExprOp::Var: return s.numeric(e.var_index());
    case ExprOp::Add: result = eval_expr(e.lhs(), s) + eval_expr(e.rhs(), s); break;
    case ExprOp::Sub: result = eval_expr(e.lhs(), s) - eval_expr(e.rhs(), s); break;
    case ExprOp::Mul: result = eval_expr(e.lhs(), s) * eval_expr(e.rhs(), s); break;
    case ExprOp::Div: {
      const double num = eval_expr(e.lhs(), s);
      const double den = eval_expr(e.rhs(), s);
      if (den == 0.0) throw Error(ErrorKind::DivisionByZero, "division by zero");
      result = num / den;
      break;
    }
  }
  if (!std::isfinite(result)) throw Error(ErrorKind::NonFiniteResult, "expression evaluated to a non-finite value");
  return result;
}

inline bool holds(const NumCondition& c, const State& s, const EvalPolicy& p = {}) {
  const double v = eval_expr(c.expr, s);
  switch (c.cmp) {
    case Comparator::GE: return v >= 0.0;
    case Comparator::GT: return v > 0.0;
    case Comparator::EQ: return std::abs(v) <= p.eq_tolerance;
  }
  return false;
}

inline bool applicable(const GroundAction& a, const State& s, const EvalPolicy& p = {}) {
  for (VarIndex i : a.pre_prop) {
    if (!s.boolean(i)) return false;
  }
  for (const NumCondition& c : a.pre_num) {
    if (!holds(c, s, p)) return false;
  }
  return true;
}

/// Successor of `s` under `a`, or nullopt (the s_⊥ marker) when `a` is not
/// applicable. All right-hand sides are read from `s` before anything is
/// written.
inline std::optional<State> apply(const GroundAction& a, const State& s, const EvalPolicy& p = {}) {
  if (!applicable(a, s, p)) return std::nullopt;
  std::vector<double> values;
  values.reserve(a.eff_num.size());
  for (const auto& [var, expr] : a.eff_num) values.push_back(eval_expr(expr, s));
  State next = s;
  for (const auto& [var, value] : a.eff_bool) next.set_boolean(var, value);
  for (std::size_t i = 0; i < values.size(); ++i) next.set_numeric(a.eff_num[i].first, values[i]);
  return next;
}

inline bool satisfies_goal(const State& s, const NumericTask& task, const EvalPolicy& p = {}) {
  for (VarIndex i : task.goal().prop_literals) {
    if (!s.boolean(i)) return false;
  }
  for (const NumCondition& c : task.goal().num_conditions) {
    if (!holds(c, s, p)) return false;
  }
  return true;
}

struct ValidationReport {
  bool valid = false;
  /// 1-based index of the first failing step; unset on success or when only
  /// the goal test failed.
  std::optional<std::size_t> failed_step;
  std::string reason;
  State final_state;
  std::size_t length = 0;
};

inline ValidationReport validate_plan(const NumericTask& task, const Plan& plan, const EvalPolicy& p = {}) {
  ValidationReport report;
  report.length = plan.size();
  State current = task.initial();
  for (std::size_t step = 0; step < plan.size(); ++step) {
    const ActionId id = plan.actions[step];
    if (id >= task.actions().size()) {
      report.failed_step = step + 1;
      report.reason = "step " + std::to_string(step + 1) + ": unknown action id " + std::to_string(id);
      report.final_state = current;
      return report;
    }
    const GroundAction& a = task.action(id);
    std::optional<State> next;
    try {
      next = apply(a, current, p);
    } catch (const Error& e) {
      report.failed_step = step + 1;
      report.reason = "step " + std::to_string(step + 1) + ": (" + a.name + ") " + e.message();
      report.final_state = current;
      return report;
    }
    if (!next) {
      report.failed_step = step + 1;
      report.reason = "step " + std::to_string(step + 1) + ": (" + a.name + ") is not applicable";
      report.final_state = current;
      return report;
    }
    current = std::move(*next);
  }
  report.final_state = current;
  bool goal = false;
  try {
    goal = satisfies_goal(current, task, p);
  } catch (const Error& e) {
    report.reason = "goal unsatisfied: " + e.message();
    return report;
  }
  if (!goal) {
    report.reason = "goal unsatisfied";
    return report;
  }
  report.valid = true;
  return report;
}

}  // namespace numplan
