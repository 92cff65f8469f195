#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "numplan/model.hpp"
#include "numplan/pddl/ast.hpp"
#include "numplan/semantics.hpp"

namespace numplan {

/// Rewrites `lhs cmp rhs` to the canonical `ξ ⊵ 0`: (lhs - rhs) for >=, >, =
/// and (rhs - lhs) with the flipped comparator for <=, <.
inline NumCondition normalize_condition(const NumExpr& lhs, pddl::CompareOp cmp, const NumExpr& rhs) {
  using pddl::CompareOp;
  switch (cmp) {
    case CompareOp::GE: return {NumExpr::sub(lhs, rhs), Comparator::GE};
    case CompareOp::GT: return {NumExpr::sub(lhs, rhs), Comparator::GT};
    case CompareOp::EQ: return {NumExpr::sub(lhs, rhs), Comparator::EQ};
    case CompareOp::LE: return {NumExpr::sub(rhs, lhs), Comparator::GE};
    case CompareOp::LT: return {NumExpr::sub(rhs, lhs), Comparator::GT};
  }
  return {NumExpr::sub(lhs, rhs), Comparator::GE};
}

struct GroundOptions {
  /// Drop atoms no action can change (deleting actions that need a false
  /// one) and fold never-assigned functions into constants.
  bool prune_static = true;
  std::size_t max_instantiations = 10'000'000;
};

namespace detail {

inline std::string ground_key(const std::string& name, const std::vector<std::string>& args) {
  std::string key = name;
  for (const auto& a : args) key += " " + a;
  return key;
}

class Grounder {
 public:
  Grounder(const pddl::DomainAst& domain, const pddl::ProblemAst& problem, GroundOptions options)
      : domain_(domain), problem_(problem), options_(options) {
    index_types();
    index_init();
  }

  NumericTask run() {
    check_instantiation_count();
    // Pass 1: every ground atom and function an effect can touch.
    for (const auto& schema : domain_.actions) {
      for_each_binding(schema, [&](const std::vector<std::string>& binding) {
        for (const auto& a : schema.effect.add) fluent_atoms_.insert(substitute(a, schema, binding));
        for (const auto& a : schema.effect.del) fluent_atoms_.insert(substitute(a, schema, binding));
        for (const auto& e : schema.effect.numeric) fluent_functions_.insert(substitute(e.function, schema, binding));
      });
    }
    // Pass 2: build actions.
    std::vector<RawAction> raw;
    for (const auto& schema : domain_.actions) {
      for_each_binding(schema, [&](const std::vector<std::string>& binding) {
        if (auto a = instantiate(schema, binding)) raw.push_back(std::move(*a));
      });
    }
    RawGoal goal = instantiate_goal();
    if (!options_.prune_static) {
      // Without pruning, an action that reads an undefined function can
      // never be applied, so it is left out instead of failing the task.
      std::erase_if(raw, [&](const RawAction& a) { return !initialized(a); });
    }

    // Variable enumeration: sorted names, so the order is stable.
    std::set<std::string> bools;
    std::set<std::string> nums;
    for (const auto& a : raw) {
      bools.insert(a.pre_atoms.begin(), a.pre_atoms.end());
      for (const auto& [k, v] : a.bool_effects) bools.insert(k);
      for (const auto& c : a.conditions) collect_functions(c.lhs, nums), collect_functions(c.rhs, nums);
      for (const auto& e : a.num_effects) nums.insert(e.target), collect_functions(e.value, nums);
    }
    bools.insert(goal.atoms.begin(), goal.atoms.end());
    for (const auto& c : goal.conditions) collect_functions(c.lhs, nums), collect_functions(c.rhs, nums);
    if (!options_.prune_static) {
      bools.insert(init_atoms_.begin(), init_atoms_.end());
      for (const auto& [k, v] : init_values_) nums.insert(k);
    }

    std::vector<std::string> bool_vars(bools.begin(), bools.end());
    std::vector<std::string> num_vars(nums.begin(), nums.end());
    for (std::size_t i = 0; i < bool_vars.size(); ++i) bool_index_[bool_vars[i]] = static_cast<VarIndex>(i);
    for (std::size_t i = 0; i < num_vars.size(); ++i) num_index_[num_vars[i]] = static_cast<VarIndex>(i);

    std::vector<bool> init_bools(bool_vars.size(), false);
    for (std::size_t i = 0; i < bool_vars.size(); ++i) init_bools[i] = init_atoms_.contains(bool_vars[i]);
    std::vector<double> init_nums(num_vars.size(), 0.0);
    for (std::size_t i = 0; i < num_vars.size(); ++i) {
      auto it = init_values_.find(num_vars[i]);
      if (it == init_values_.end()) {
        throw Error(ErrorKind::UninitializedFunction, "function (" + num_vars[i] + ") has no initial value",
                    num_vars[i]);
      }
      init_nums[i] = it->second;
    }

    std::vector<GroundAction> actions;
    actions.reserve(raw.size());
    for (const auto& r : raw) actions.push_back(finish(r));

    GoalCondition g;
    for (const auto& a : goal.atoms) g.prop_literals.push_back(bool_index_.at(a));
    for (const auto& c : goal.conditions) g.num_conditions.push_back(finish(c));

    return build_task(std::move(bool_vars), std::move(num_vars), std::move(actions),
                      State(std::move(init_bools), std::move(init_nums)), std::move(g));
  }

 private:
  /// Ground numeric expression over function keys, before variable indices
  /// exist.
  struct GExpr {
    enum Kind { Number, Function, Add, Sub, Mul, Div } kind = Number;
    double value = 0.0;
    std::string function;
    std::vector<GExpr> children;
  };
  struct GCond {
    pddl::CompareOp op;
    GExpr lhs;
    GExpr rhs;
  };
  struct GNumEffect {
    std::string target;
    GExpr value;
  };
  struct RawAction {
    std::string name;
    std::vector<std::string> pre_atoms;
    std::vector<GCond> conditions;
    std::vector<std::pair<std::string, bool>> bool_effects;
    std::vector<GNumEffect> num_effects;
    std::vector<bool> additive;
  };
  struct RawGoal {
    std::vector<std::string> atoms;
    std::vector<GCond> conditions;
  };

  void index_types() {
    parent_["object"] = "";
    for (const auto& t : domain_.types) {
      parent_[t.name] = t.name == "object" ? "" : t.type;
      if (!parent_.contains(t.type)) parent_[t.type] = "object";
    }
    auto add_object = [&](const pddl::TypedName& o) {
      std::unordered_set<std::string> visited;
      for (std::string t = o.type; !t.empty() && visited.insert(t).second;) {
        objects_by_type_[t].push_back(o.name);
        auto it = parent_.find(t);
        if (it == parent_.end()) {
          throw Error(ErrorKind::UnknownObjectType, "unknown type '" + t + "'", t);
        }
        t = it->second;
      }
      if (!visited.contains("object")) objects_by_type_["object"].push_back(o.name);
    };
    for (const auto& c : domain_.constants) add_object(c);
    for (const auto& o : problem_.objects) add_object(o);
  }

  void index_init() {
    for (const auto& a : problem_.init_atoms) init_atoms_.insert(ground_key(a.name, a.args));
    for (const auto& v : problem_.init_values) init_values_[ground_key(v.function.name, v.function.args)] = v.value;
  }

  const std::vector<std::string>& objects_of(const std::string& type) const {
    static const std::vector<std::string> none;
    auto it = objects_by_type_.find(type);
    return it == objects_by_type_.end() ? none : it->second;
  }

  void check_instantiation_count() const {
    long double total = 0;
    for (const auto& schema : domain_.actions) {
      long double n = 1;
      for (const auto& p : schema.parameters) n *= static_cast<long double>(objects_of(p.type).size());
      total += n;
    }
    if (total > static_cast<long double>(options_.max_instantiations)) {
      throw Error(ErrorKind::GroundingExplosion,
                  "grounding would create more than " + std::to_string(options_.max_instantiations) +
                      " action instances",
                  std::to_string(options_.max_instantiations));
    }
  }

  template <typename Fn>
  void for_each_binding(const pddl::ActionSchema& schema, Fn&& fn) const {
    const std::size_t n = schema.parameters.size();
    std::vector<const std::vector<std::string>*> domains;
    for (const auto& p : schema.parameters) {
      domains.push_back(&objects_of(p.type));
      if (domains.back()->empty()) return;
    }
    std::vector<std::size_t> odometer(n, 0);
    std::vector<std::string> binding(n);
    for (;;) {
      for (std::size_t i = 0; i < n; ++i) binding[i] = (*domains[i])[odometer[i]];
      fn(binding);
      std::size_t i = n;
      while (i > 0) {
        --i;
        if (++odometer[i] < domains[i]->size()) break;
        odometer[i] = 0;
        if (i == 0) return;
      }
      if (n == 0) return;
    }
  }

  static std::string resolve(const std::string& arg, const pddl::ActionSchema& schema,
                             const std::vector<std::string>& binding) {
    if (arg.empty() || arg.front() != '?') return arg;
    for (std::size_t i = 0; i < schema.parameters.size(); ++i) {
      if (schema.parameters[i].name == arg) return binding[i];
    }
    throw Error(ErrorKind::SyntaxError, "unbound variable '" + arg + "' in action '" + schema.name + "'", arg);
  }

  static std::string substitute(const pddl::Atom& a, const pddl::ActionSchema& schema,
                                const std::vector<std::string>& binding) {
    std::string key = a.name;
    for (const auto& arg : a.args) key += " " + resolve(arg, schema, binding);
    return key;
  }

  GExpr ground_expr(const pddl::NumExprAst& e, const pddl::ActionSchema* schema,
                    const std::vector<std::string>& binding) const {
    GExpr g;
    switch (e.op) {
      case pddl::NumOp::Number:
        g.kind = GExpr::Number;
        g.value = e.value;
        return g;
      case pddl::NumOp::Function: {
        const std::string key = schema ? substitute(e.function, *schema, binding)
                                       : ground_key(e.function.name, e.function.args);
        if (options_.prune_static && !fluent_functions_.contains(key)) {
          auto it = init_values_.find(key);
          if (it == init_values_.end()) {
            throw Error(ErrorKind::UninitializedFunction, "function (" + key + ") has no initial value", key);
          }
          g.kind = GExpr::Number;
          g.value = it->second;
          return g;
        }
        g.kind = GExpr::Function;
        g.function = key;
        return g;
      }
      case pddl::NumOp::Add: g.kind = GExpr::Add; break;
      case pddl::NumOp::Sub: g.kind = GExpr::Sub; break;
      case pddl::NumOp::Mul: g.kind = GExpr::Mul; break;
      case pddl::NumOp::Div: g.kind = GExpr::Div; break;
    }
    if (e.op == pddl::NumOp::Sub && e.operands.size() == 1) {
      GExpr zero;
      zero.kind = GExpr::Number;
      g.children.push_back(zero);
      g.children.push_back(ground_expr(e.operands[0], schema, binding));
      return fold(std::move(g));
    }
    // n-ary + and * associate to the left.
    g.children.push_back(ground_expr(e.operands[0], schema, binding));
    g.children.push_back(ground_expr(e.operands[1], schema, binding));
    g = fold(std::move(g));
    for (std::size_t i = 2; i < e.operands.size(); ++i) {
      GExpr outer;
      outer.kind = e.op == pddl::NumOp::Add ? GExpr::Add : GExpr::Mul;
      outer.children.push_back(std::move(g));
      outer.children.push_back(ground_expr(e.operands[i], schema, binding));
      g = fold(std::move(outer));
    }
    return g;
  }

  /// Collapses a binary node with two constant children (only when static
  /// pruning is on, so the unpruned task mirrors the source expression).
  GExpr fold(GExpr g) const {
    if (!options_.prune_static || g.children.size() != 2) return g;
    const GExpr& l = g.children[0];
    const GExpr& r = g.children[1];
    if (l.kind != GExpr::Number || r.kind != GExpr::Number) return g;
    double v = 0.0;
    switch (g.kind) {
      case GExpr::Add: v = l.value + r.value; break;
      case GExpr::Sub: v = l.value - r.value; break;
      case GExpr::Mul: v = l.value * r.value; break;
      case GExpr::Div:
        if (r.value == 0.0) return g;
        v = l.value / r.value;
        break;
      default: return g;
    }
    if (!std::isfinite(v)) return g;
    GExpr c;
    c.kind = GExpr::Number;
    c.value = v == 0.0 ? 0.0 : v;
    return c;
  }

  bool initialized(const GExpr& g) const {
    if (g.kind == GExpr::Function && !init_values_.contains(g.function)) return false;
    return std::all_of(g.children.begin(), g.children.end(), [&](const GExpr& c) { return initialized(c); });
  }

  bool initialized(const RawAction& a) const {
    for (const auto& c : a.conditions) {
      if (!initialized(c.lhs) || !initialized(c.rhs)) return false;
    }
    for (const auto& e : a.num_effects) {
      if (!init_values_.contains(e.target) || !initialized(e.value)) return false;
    }
    return true;
  }

  static bool has_function(const GExpr& g) {
    if (g.kind == GExpr::Function) return true;
    return std::any_of(g.children.begin(), g.children.end(), has_function);
  }

  static void collect_functions(const GExpr& g, std::set<std::string>& out) {
    if (g.kind == GExpr::Function) out.insert(g.function);
    for (const auto& c : g.children) collect_functions(c, out);
  }

  /// Evaluates a function-free ground condition; nullopt if evaluation fails.
  std::optional<bool> constant_truth(const GCond& c) const {
    try {
      const NumCondition nc = finish(c);
      return holds(nc, State({}, {}));
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  /// Returns false when a static condition makes the action/goal impossible.
  bool add_condition(const pddl::Comparison& cmp, const pddl::ActionSchema* schema,
                     const std::vector<std::string>& binding, std::vector<GCond>& out) const {
    GCond c{cmp.op, ground_expr(cmp.lhs, schema, binding), ground_expr(cmp.rhs, schema, binding)};
    if (options_.prune_static && !has_function(c.lhs) && !has_function(c.rhs)) {
      const auto truth = constant_truth(c);
      if (truth && *truth) return true;
      if (schema) return false;  // never applicable
    }
    out.push_back(std::move(c));
    return true;
  }

  std::optional<RawAction> instantiate(const pddl::ActionSchema& schema, const std::vector<std::string>& binding) {
    RawAction a;
    a.name = schema.name;
    for (const auto& b : binding) a.name += " " + b;
    for (const auto& atom : schema.precondition.atoms) {
      std::string key = substitute(atom, schema, binding);
      if (options_.prune_static && !fluent_atoms_.contains(key)) {
        if (!init_atoms_.contains(key)) return std::nullopt;
        continue;
      }
      if (std::find(a.pre_atoms.begin(), a.pre_atoms.end(), key) == a.pre_atoms.end()) {
        a.pre_atoms.push_back(std::move(key));
      }
    }
    for (const auto& cmp : schema.precondition.comparisons) {
      if (!add_condition(cmp, &schema, binding, a.conditions)) return std::nullopt;
    }
    // Deletes first, then adds: an atom both deleted and added ends up true.
    for (const auto& atom : schema.effect.del) set_bool_effect(a, substitute(atom, schema, binding), false);
    for (const auto& atom : schema.effect.add) set_bool_effect(a, substitute(atom, schema, binding), true);
    for (const auto& e : schema.effect.numeric) {
      const std::string target = substitute(e.function, schema, binding);
      GExpr value = ground_expr(e.value, &schema, binding);
      GExpr self;
      self.kind = GExpr::Function;
      self.function = target;
      auto combine = [&](GExpr::Kind kind) {
        GExpr g;
        g.kind = kind;
        g.children.push_back(self);
        g.children.push_back(std::move(value));
        return g;
      };
      switch (e.op) {
        case pddl::AssignOp::Assign: break;
        case pddl::AssignOp::Increase: value = combine(GExpr::Add); break;
        case pddl::AssignOp::Decrease: value = combine(GExpr::Sub); break;
        case pddl::AssignOp::ScaleUp: value = combine(GExpr::Mul); break;
        case pddl::AssignOp::ScaleDown: value = combine(GExpr::Div); break;
      }
      auto same = std::find_if(a.num_effects.begin(), a.num_effects.end(),
                               [&](const auto& x) { return x.target == target; });
      if (same == a.num_effects.end()) {
        a.num_effects.push_back({target, std::move(value)});
        a.additive.push_back(e.op == pddl::AssignOp::Increase || e.op == pddl::AssignOp::Decrease);
        continue;
      }
      // Increase/decrease on one target add up; anything else is a conflict.
      const std::size_t i = static_cast<std::size_t>(same - a.num_effects.begin());
      if (!a.additive[i] || !(e.op == pddl::AssignOp::Increase || e.op == pddl::AssignOp::Decrease)) return std::nullopt;
      GExpr delta = std::move(value.children[1]);
      GExpr merged;
      merged.kind = e.op == pddl::AssignOp::Increase ? GExpr::Add : GExpr::Sub;
      merged.children.push_back(std::move(same->value));
      merged.children.push_back(std::move(delta));
      same->value = std::move(merged);
    }
    return a;
  }

  static void set_bool_effect(RawAction& a, std::string key, bool value) {
    for (auto& [k, v] : a.bool_effects) {
      if (k == key) {
        v = value;
        return;
      }
    }
    a.bool_effects.emplace_back(std::move(key), value);
  }

  RawGoal instantiate_goal() const {
    RawGoal g;
    const std::vector<std::string> none;
    for (const auto& atom : problem_.goal.atoms) {
      std::string key = ground_key(atom.name, atom.args);
      // Static goal atoms that hold are dropped; false ones stay as
      // never-changing variables so the goal remains unreachable.
      if (options_.prune_static && !fluent_atoms_.contains(key) && init_atoms_.contains(key)) continue;
      if (std::find(g.atoms.begin(), g.atoms.end(), key) == g.atoms.end()) g.atoms.push_back(std::move(key));
    }
    for (const auto& cmp : problem_.goal.comparisons) add_condition(cmp, nullptr, none, g.conditions);
    return g;
  }

  NumExpr finish(const GExpr& g) const {
    switch (g.kind) {
      case GExpr::Number: return NumExpr::constant(g.value);
      case GExpr::Function: return NumExpr::var(num_index_.at(g.function));
      case GExpr::Add: return NumExpr::add(finish(g.children[0]), finish(g.children[1]));
      case GExpr::Sub: return NumExpr::sub(finish(g.children[0]), finish(g.children[1]));
      case GExpr::Mul: return NumExpr::mul(finish(g.children[0]), finish(g.children[1]));
      case GExpr::Div: return NumExpr::div(finish(g.children[0]), finish(g.children[1]));
    }
    return NumExpr::constant(0.0);
  }

  NumCondition finish(const GCond& c) const { return normalize_condition(finish(c.lhs), c.op, finish(c.rhs)); }

  GroundAction finish(const RawAction& r) const {
    GroundAction a;
    a.name = r.name;
    for (const auto& k : r.pre_atoms) a.pre_prop.push_back(bool_index_.at(k));
    for (const auto& c : r.conditions) a.pre_num.push_back(finish(c));
    for (const auto& [k, v] : r.bool_effects) a.eff_bool.emplace_back(bool_index_.at(k), v);
    for (const auto& e : r.num_effects) a.eff_num.emplace_back(num_index_.at(e.target), finish(e.value));
    return a;
  }

  const pddl::DomainAst& domain_;
  const pddl::ProblemAst& problem_;
  GroundOptions options_;

  std::unordered_map<std::string, std::string> parent_;
  std::unordered_map<std::string, std::vector<std::string>> objects_by_type_;
  std::unordered_set<std::string> init_atoms_;
  std::unordered_map<std::string, double> init_values_;
  std::unordered_set<std::string> fluent_atoms_;
  std::unordered_set<std::string> fluent_functions_;
  std::unordered_map<std::string, VarIndex> bool_index_;
  std::unordered_map<std::string, VarIndex> num_index_;
};

}  // namespace detail

/// Instantiates every schema over all type-consistent object tuples and
/// emits the grounded task.
inline NumericTask ground(const pddl::DomainAst& domain, const pddl::ProblemAst& problem, GroundOptions options = {}) {
  return detail::Grounder(domain, problem, options).run();
}

}  // namespace numplan
