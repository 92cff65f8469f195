#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "numplan/error.hpp"

namespace numplan {

using VarIndex = std::uint32_t;
using ActionId = std::uint32_t;

// ---------------------------------------------------------------------------
// Numeric expressions

enum class ExprOp : std::uint8_t { Const, Var, Add, Sub, Mul, Div };

/// Immutable arithmetic expression tree over numeric variables. Copies share
/// nodes; there is no way to mutate a node after construction.
class NumExpr {
 public:
  NumExpr() : NumExpr(constant(0.0)) {}

  static NumExpr constant(double value) {
    return NumExpr(std::make_shared<const Node>(Node{ExprOp::Const, value, 0, {}, {}}));
  }
  static NumExpr var(VarIndex index) {
    return NumExpr(std::make_shared<const Node>(Node{ExprOp::Var, 0.0, index, {}, {}}));
  }
  static NumExpr binary(ExprOp op, NumExpr lhs, NumExpr rhs) {
    return NumExpr(std::make_shared<const Node>(
        Node{op, 0.0, 0, std::move(lhs.node_), std::move(rhs.node_)}));
  }
  static NumExpr add(NumExpr a, NumExpr b) { return binary(ExprOp::Add, std::move(a), std::move(b)); }
  static NumExpr sub(NumExpr a, NumExpr b) { return binary(ExprOp::Sub, std::move(a), std::move(b)); }
  static NumExpr mul(NumExpr a, NumExpr b) { return binary(ExprOp::Mul, std::move(a), std::move(b)); }
  static NumExpr div(NumExpr a, NumExpr b) { return binary(ExprOp::Div, std::move(a), std::move(b)); }

  ExprOp op() const { return node_->op; }
  double value() const { return node_->value; }
  VarIndex var_index() const { return node_->var; }
  NumExpr lhs() const { return NumExpr(node_->lhs); }
  NumExpr rhs() const { return NumExpr(node_->rhs); }
  bool is_binary() const { return node_->op != ExprOp::Const && node_->op != ExprOp::Var; }

  /// Calls `fn(index)` for every variable leaf, left to right.
  template <typename Fn>
  void for_each_var(Fn&& fn) const {
    visit_vars(node_.get(), fn);
  }

  friend bool operator==(const NumExpr& a, const NumExpr& b) { return equal(a.node_.get(), b.node_.get()); }

  friend std::ostream& operator<<(std::ostream& os, const NumExpr& e) {
    switch (e.op()) {
      case ExprOp::Const: return os << e.value();
      case ExprOp::Var: return os << "x" << e.var_index();
      case ExprOp::Add: return os << "(+ " << e.lhs() << " " << e.rhs() << ")";
      case ExprOp::Sub: return os << "(- " << e.lhs() << " " << e.rhs() << ")";
      case ExprOp::Mul: return os << "(* " << e.lhs() << " " << e.rhs() << ")";
      case ExprOp::Div: return os << "(/ " << e.lhs() << " " << e.rhs() << ")";
    }
    return os;
  }

 private:
  struct Node {
    ExprOp op;
    double value;
    VarIndex var;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  explicit NumExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  template <typename Fn>
  static void visit_vars(const Node* n, Fn& fn) {
    if (n->op == ExprOp::Var) {
      fn(n->var);
    } else if (n->op != ExprOp::Const) {
      visit_vars(n->lhs.get(), fn);
      visit_vars(n->rhs.get(), fn);
    }
  }

  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (a->op != b->op) return false;
    switch (a->op) {
      case ExprOp::Const: return a->value == b->value;
      case ExprOp::Var: return a->var == b->var;
      default: return equal(a->lhs.get(), b->lhs.get()) && equal(a->rhs.get(), b->rhs.get());
    }
  }

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Conditions, actions, goals

enum class Comparator : std::uint8_t { GE, GT, EQ };

/// `expr ⊵ 0` with ⊵ one of >=, >, =.
struct NumCondition {
  NumExpr expr;
  Comparator cmp = Comparator::GE;

  friend bool operator==(const NumCondition&, const NumCondition&) = default;
};

struct GroundAction {
  std::string name;  // "move truck1 depot1 depot2"
  std::vector<VarIndex> pre_prop;
  std::vector<NumCondition> pre_num;
  std::vector<std::pair<VarIndex, bool>> eff_bool;
  std::vector<std::pair<VarIndex, NumExpr>> eff_num;
};

struct GoalCondition {
  std::vector<VarIndex> prop_literals;
  std::vector<NumCondition> num_conditions;

  bool empty() const { return prop_literals.empty() && num_conditions.empty(); }
};

// ---------------------------------------------------------------------------
// States

/// Total assignment. Numeric values are always finite and never negative
/// zero, so bitwise comparison of the numeric vector is value equality.
class State {
 public:
  State() = default;
  State(std::vector<bool> bools, std::vector<double> nums) : bools_(std::move(bools)), nums_(std::move(nums)) {
    for (double& v : nums_) v = canonical(v);
  }

  const std::vector<bool>& bools() const { return bools_; }
  const std::vector<double>& nums() const { return nums_; }
  bool boolean(VarIndex i) const { return bools_[i]; }
  double numeric(VarIndex i) const { return nums_[i]; }

  void set_boolean(VarIndex i, bool v) { bools_[i] = v; }
  void set_numeric(VarIndex i, double v) { nums_[i] = canonical(v); }

  friend bool operator==(const State& a, const State& b) {
    if (a.bools_ != b.bools_ || a.nums_.size() != b.nums_.size()) return false;
    for (std::size_t i = 0; i < a.nums_.size(); ++i) {
      if (std::bit_cast<std::uint64_t>(a.nums_[i]) != std::bit_cast<std::uint64_t>(b.nums_[i])) return false;
    }
    return true;
  }

  std::size_t hash() const {
    std::size_t h = std::hash<std::vector<bool>>{}(bools_);
    for (double v : nums_) {
      h ^= std::hash<std::uint64_t>{}(std::bit_cast<std::uint64_t>(v)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }

  static double canonical(double v) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::NonFiniteValue, "state value is not finite (" + std::to_string(v) + ")");
    }
    return v == 0.0 ? 0.0 : v;
  }

 private:
  std::vector<bool> bools_;
  std::vector<double> nums_;
};

struct StateHash {
  std::size_t operator()(const State& s) const { return s.hash(); }
};

// ---------------------------------------------------------------------------
// Task

struct Plan {
  std::vector<ActionId> actions;

  std::size_t size() const { return actions.size(); }
  bool empty() const { return actions.empty(); }
  friend bool operator==(const Plan&, const Plan&) = default;
};

class NumericTask;
NumericTask build_task(std::vector<std::string> bool_vars, std::vector<std::string> num_vars,
                       std::vector<GroundAction> actions, State initial, GoalCondition goal);

/// Grounded task. Only build_task creates one, after checking every index;
/// afterwards it is read-only.
class NumericTask {
 public:
  const std::vector<std::string>& bool_vars() const { return bool_vars_; }
  const std::vector<std::string>& num_vars() const { return num_vars_; }
  const std::vector<GroundAction>& actions() const { return actions_; }
  const GroundAction& action(ActionId id) const { return actions_[id]; }
  const State& initial() const { return initial_; }
  const GoalCondition& goal() const { return goal_; }

  std::size_t num_bool_vars() const { return bool_vars_.size(); }
  std::size_t num_numeric_vars() const { return num_vars_.size(); }
  /// N = |X_p| + |X_n|; Booleans come first in the enumeration.
  std::size_t num_variables() const { return bool_vars_.size() + num_vars_.size(); }

 private:
  friend NumericTask build_task(std::vector<std::string>, std::vector<std::string>, std::vector<GroundAction>,
                                State, GoalCondition);
  NumericTask() = default;

  std::vector<std::string> bool_vars_;
  std::vector<std::string> num_vars_;
  std::vector<GroundAction> actions_;
  State initial_;
  GoalCondition goal_;
};

namespace detail {

inline void check_bool_index(VarIndex i, std::size_t n, const std::string& where) {
  if (i >= n) {
    throw Error(ErrorKind::IndexOutOfRange,
                where + ": Boolean variable index " + std::to_string(i) + " >= " + std::to_string(n));
  }
}

inline void check_expr(const NumExpr& e, std::size_t n, const std::string& where) {
  e.for_each_var([&](VarIndex i) {
    if (i >= n) {
      throw Error(ErrorKind::IndexOutOfRange,
                  where + ": numeric variable index " + std::to_string(i) + " >= " + std::to_string(n));
    }
  });
}

}  // namespace detail

inline NumericTask build_task(std::vector<std::string> bool_vars, std::vector<std::string> num_vars,
                              std::vector<GroundAction> actions, State initial, GoalCondition goal) {
  const std::size_t nb = bool_vars.size();
  const std::size_t nn = num_vars.size();
  if (initial.bools().size() != nb || initial.nums().size() != nn) {
    throw Error(ErrorKind::NonTotalInitialState,
                "initial state assigns " + std::to_string(initial.bools().size()) + "/" + std::to_string(nb) +
                    " Boolean and " + std::to_string(initial.nums().size()) + "/" + std::to_string(nn) +
                    " numeric variables");
  }
  for (const GroundAction& a : actions) {
    const std::string where = "action '" + a.name + "'";
    for (VarIndex i : a.pre_prop) detail::check_bool_index(i, nb, where);
    for (const NumCondition& c : a.pre_num) detail::check_expr(c.expr, nn, where);
    std::unordered_set<VarIndex> seen;
    for (const auto& [i, v] : a.eff_bool) {
      detail::check_bool_index(i, nb, where);
      if (!seen.insert(i).second) {
        throw Error(ErrorKind::DuplicateEffect, where + " assigns Boolean variable " + bool_vars[i] + " twice");
      }
    }
    seen.clear();
    for (const auto& [i, e] : a.eff_num) {
      if (i >= nn) {
        throw Error(ErrorKind::IndexOutOfRange,
                    where + ": assigned numeric variable index " + std::to_string(i) + " >= " + std::to_string(nn));
      }
      detail::check_expr(e, nn, where);
      if (!seen.insert(i).second) {
        throw Error(ErrorKind::DuplicateEffect, where + " assigns numeric variable " + num_vars[i] + " twice");
      }
    }
  }
  for (VarIndex i : goal.prop_literals) detail::check_bool_index(i, nb, "goal");
  for (const NumCondition& c : goal.num_conditions) detail::check_expr(c.expr, nn, "goal");

  NumericTask task;
  task.bool_vars_ = std::move(bool_vars);
  task.num_vars_ = std::move(num_vars);
  task.actions_ = std::move(actions);
  task.initial_ = std::move(initial);
  task.goal_ = std::move(goal);
  return task;
}

}  // namespace numplan
