#pragma once

#include <charconv>
#include <string>
#include <vector>

namespace numplan::pddl {

struct TypedName {
  std::string name;
  std::string type = "object";
  friend bool operator==(const TypedName&, const TypedName&) = default;
};

/// Predicate or function application; args are variables (`?x`) or objects.
struct Atom {
  std::string name;
  std::vector<std::string> args;
  friend bool operator==(const Atom&, const Atom&) = default;
};

enum class NumOp { Number, Function, Add, Sub, Mul, Div };

/// Lifted numeric expression exactly as written: `+` and `*` keep all their
/// operands and a one-operand `-` is negation.
struct NumExprAst {
  NumOp op = NumOp::Number;
  double value = 0.0;
  Atom function;
  std::vector<NumExprAst> operands;

  static NumExprAst number(double v) { return {NumOp::Number, v, {}, {}}; }
  static NumExprAst fluent(Atom f) { return {NumOp::Function, 0.0, std::move(f), {}}; }
  static NumExprAst apply(NumOp op, std::vector<NumExprAst> args) { return {op, 0.0, {}, std::move(args)}; }

  friend bool operator==(const NumExprAst&, const NumExprAst&) = default;
};

enum class CompareOp { LE, LT, EQ, GE, GT };

struct Comparison {
  CompareOp op = CompareOp::GE;
  NumExprAst lhs;
  NumExprAst rhs;
  friend bool operator==(const Comparison&, const Comparison&) = default;
};

/// Conjunction of positive atoms and numeric comparisons.
struct Condition {
  std::vector<Atom> atoms;
  std::vector<Comparison> comparisons;

  bool empty() const { return atoms.empty() && comparisons.empty(); }
  friend bool operator==(const Condition&, const Condition&) = default;
};

enum class AssignOp { Assign, Increase, Decrease, ScaleUp, ScaleDown };

struct NumericEffect {
  AssignOp op = AssignOp::Assign;
  Atom function;
  NumExprAst value;
  friend bool operator==(const NumericEffect&, const NumericEffect&) = default;
};

struct Effect {
  std::vector<Atom> add;
  std::vector<Atom> del;
  std::vector<NumericEffect> numeric;
  friend bool operator==(const Effect&, const Effect&) = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> parameters;
  Condition precondition;
  Effect effect;
  friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

struct Signature {
  std::string name;
  std::vector<TypedName> parameters;
  friend bool operator==(const Signature&, const Signature&) = default;
};

struct DomainAst {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<TypedName> types;  // name + parent type
  std::vector<TypedName> constants;
  std::vector<Signature> predicates;
  std::vector<Signature> functions;
  std::vector<ActionSchema> actions;
  friend bool operator==(const DomainAst&, const DomainAst&) = default;
};

struct FunctionValue {
  Atom function;
  double value = 0.0;
  friend bool operator==(const FunctionValue&, const FunctionValue&) = default;
};

struct ProblemAst {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  std::vector<Atom> init_atoms;
  std::vector<FunctionValue> init_values;
  Condition goal;
  bool has_metric = false;
  std::vector<std::string> warnings;

  friend bool operator==(const ProblemAst& a, const ProblemAst& b) {
    return a.name == b.name && a.domain_name == b.domain_name && a.objects == b.objects &&
           a.init_atoms == b.init_atoms && a.init_values == b.init_values && a.goal == b.goal;
  }
};

// ---------------------------------------------------------------------------
// Printing

inline std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::string to_pddl(const Atom& a) {
  std::string out = "(" + a.name;
  for (const auto& arg : a.args) out += " " + arg;
  return out + ")";
}

inline std::string to_pddl(const NumExprAst& e) {
  switch (e.op) {
    case NumOp::Number: return format_number(e.value);
    case NumOp::Function: return to_pddl(e.function);
    default: break;
  }
  const char* sym = e.op == NumOp::Add ? "+" : e.op == NumOp::Sub ? "-" : e.op == NumOp::Mul ? "*" : "/";
  std::string out = std::string("(") + sym;
  for (const auto& o : e.operands) out += " " + to_pddl(o);
  return out + ")";
}

inline const char* to_pddl(CompareOp op) {
  switch (op) {
    case CompareOp::LE: return "<=";
    case CompareOp::LT: return "<";
    case CompareOp::EQ: return "=";
    case CompareOp::GE: return ">=";
    case CompareOp::GT: return ">";
  }
  return "?";
}

inline const char* to_pddl(AssignOp op) {
  switch (op) {
    case AssignOp::Assign: return "assign";
    case AssignOp::Increase: return "increase";
    case AssignOp::Decrease: return "decrease";
    case AssignOp::ScaleUp: return "scale-up";
    case AssignOp::ScaleDown: return "scale-down";
  }
  return "?";
}

inline std::string to_pddl(const Condition& c) {
  std::string out = "(and";
  for (const auto& a : c.atoms) out += " " + to_pddl(a);
  for (const auto& cmp : c.comparisons) {
    out += std::string(" (") + to_pddl(cmp.op) + " " + to_pddl(cmp.lhs) + " " + to_pddl(cmp.rhs) + ")";
  }
  return out + ")";
}

inline std::string to_pddl(const Effect& e) {
  std::string out = "(and";
  for (const auto& a : e.add) out += " " + to_pddl(a);
  for (const auto& a : e.del) out += " (not " + to_pddl(a) + ")";
  for (const auto& n : e.numeric) {
    out += std::string(" (") + to_pddl(n.op) + " " + to_pddl(n.function) + " " + to_pddl(n.value) + ")";
  }
  return out + ")";
}

inline std::string typed_list(const std::vector<TypedName>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += " ";
    out += names[i].name + " - " + names[i].type;
  }
  return out;
}

inline std::string to_pddl(const Signature& s) {
  std::string out = "(" + s.name;
  if (!s.parameters.empty()) out += " " + typed_list(s.parameters);
  return out + ")";
}

inline std::string to_pddl(const DomainAst& d) {
  std::string out = "(define (domain " + d.name + ")\n";
  if (!d.requirements.empty()) {
    out += "  (:requirements";
    for (const auto& r : d.requirements) out += " " + r;
    out += ")\n";
  }
  if (!d.types.empty()) out += "  (:types " + typed_list(d.types) + ")\n";
  if (!d.constants.empty()) out += "  (:constants " + typed_list(d.constants) + ")\n";
  out += "  (:predicates";
  for (const auto& p : d.predicates) out += " " + to_pddl(p);
  out += ")\n";
  if (!d.functions.empty()) {
    out += "  (:functions";
    for (const auto& f : d.functions) out += " " + to_pddl(f) + " - number";
    out += ")\n";
  }
  for (const auto& a : d.actions) {
    out += "  (:action " + a.name + "\n";
    out += "    :parameters (" + typed_list(a.parameters) + ")\n";
    out += "    :precondition " + to_pddl(a.precondition) + "\n";
    out += "    :effect " + to_pddl(a.effect) + ")\n";
  }
  return out + ")\n";
}

inline std::string to_pddl(const ProblemAst& p) {
  std::string out = "(define (problem " + p.name + ")\n";
  out += "  (:domain " + p.domain_name + ")\n";
  if (!p.objects.empty()) out += "  (:objects " + typed_list(p.objects) + ")\n";
  out += "  (:init";
  for (const auto& a : p.init_atoms) out += " " + to_pddl(a);
  for (const auto& v : p.init_values) out += " (= " + to_pddl(v.function) + " " + format_number(v.value) + ")";
  out += ")\n";
  out += "  (:goal " + to_pddl(p.goal) + ")\n";
  return out + ")\n";
}

}  // namespace numplan::pddl
