#pragma once

#include <charconv>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "numplan/error.hpp"
#include "numplan/pddl/ast.hpp"
#include "numplan/pddl/sexpr.hpp"

namespace numplan::pddl {

[[noreturn]] inline void unsupported(const std::string& feature, SourcePos pos) {
  throw Error(ErrorKind::UnsupportedFeature, "unsupported PDDL feature: " + feature, feature, pos);
}

namespace detail {

inline std::optional<double> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline bool is_variable(const std::string& s) { return !s.empty() && s.front() == '?'; }

inline const SExpr& expect_list(const SExpr& e, const std::string& what) {
  if (!e.is_list) syntax_error("expected " + what, e.pos);
  return e;
}

inline const std::string& expect_symbol(const SExpr& e, const std::string& what) {
  if (e.is_list || e.atom.empty()) syntax_error("expected " + what, e.pos);
  return e.atom;
}

/// `a b - t c - u d` → (a,t) (b,t) (c,u) (d,object).
inline std::vector<TypedName> parse_typed_list(const SExpr& list, std::size_t start) {
  std::vector<TypedName> out;
  std::size_t pending = 0;
  for (std::size_t i = start; i < list.size(); ++i) {
    const SExpr& item = list[i];
    if (item.is_atom("-")) {
      if (pending == 0 || i + 1 >= list.size()) syntax_error("dangling '-' in typed list", item.pos);
      const SExpr& type = list[i + 1];
      if (type.has_head("either")) unsupported("either-types", type.pos);
      const std::string& t = expect_symbol(type, "type name");
      for (std::size_t j = out.size() - pending; j < out.size(); ++j) out[j].type = t;
      pending = 0;
      ++i;
      continue;
    }
    out.push_back({expect_symbol(item, "name"), "object"});
    ++pending;
  }
  return out;
}

/// Symbol tables shared by domain and problem parsing.
struct Scope {
  std::unordered_map<std::string, std::size_t> predicates;  // name -> arity
  std::unordered_map<std::string, std::size_t> functions;
  std::unordered_set<std::string> types{"object"};
  std::unordered_set<std::string> objects;     // constants (+ problem objects)
  std::unordered_set<std::string> variables;   // action parameters in scope
};

inline Atom parse_atom(const SExpr& e, const Scope& scope, bool function) {
  expect_list(e, function ? "function term" : "atom");
  if (e.size() == 0) syntax_error("empty atom", e.pos);
  Atom a;
  a.name = expect_symbol(e[0], function ? "function name" : "predicate name");
  const auto& table = function ? scope.functions : scope.predicates;
  auto it = table.find(a.name);
  if (it == table.end()) {
    throw Error(ErrorKind::UnknownPredicateOrFunction,
                std::string(function ? "unknown function '" : "unknown predicate '") + a.name + "'", a.name, e.pos);
  }
  if (it->second != e.size() - 1) {
    throw Error(ErrorKind::ArityMismatch,
                "'" + a.name + "' expects " + std::to_string(it->second) + " arguments, got " +
                    std::to_string(e.size() - 1),
                a.name, e.pos);
  }
  for (std::size_t i = 1; i < e.size(); ++i) {
    const std::string& arg = expect_symbol(e[i], "argument");
    if (is_variable(arg)) {
      if (!scope.variables.contains(arg)) syntax_error("unbound variable '" + arg + "'", e[i].pos);
    } else if (!scope.objects.contains(arg)) {
      throw Error(ErrorKind::UnknownPredicateOrFunction, "unknown object or constant '" + arg + "'", arg, e[i].pos);
    }
    a.args.push_back(arg);
  }
  return a;
}

inline NumExprAst parse_num_expr(const SExpr& e, const Scope& scope) {
  if (e.is_atom()) {
    if (auto v = parse_number(e.atom)) return NumExprAst::number(*v);
    if (scope.functions.contains(e.atom)) syntax_error("0-ary function '" + e.atom + "' must be parenthesised", e.pos);
    syntax_error("expected a number or a numeric expression, got '" + e.atom + "'", e.pos);
  }
  if (e.size() == 0) syntax_error("empty numeric expression", e.pos);
  const SExpr& head = e[0];
  if (head.is_atom()) {
    NumOp op{};
    bool arithmetic = true;
    if (head.atom == "+") op = NumOp::Add;
    else if (head.atom == "-") op = NumOp::Sub;
    else if (head.atom == "*") op = NumOp::Mul;
    else if (head.atom == "/") op = NumOp::Div;
    else arithmetic = false;
    if (arithmetic) {
      const std::size_t n = e.size() - 1;
      const bool ok = (op == NumOp::Add || op == NumOp::Mul) ? n >= 2 : (op == NumOp::Sub ? (n == 1 || n == 2) : n == 2);
      if (!ok) syntax_error("wrong number of operands for '" + head.atom + "'", e.pos);
      std::vector<NumExprAst> args;
      for (std::size_t i = 1; i < e.size(); ++i) args.push_back(parse_num_expr(e[i], scope));
      return NumExprAst::apply(op, std::move(args));
    }
    if (head.atom == "#t" || head.atom == "?duration") unsupported("durative-actions", e.pos);
  }
  return NumExprAst::fluent(parse_atom(e, scope, true));
}

inline std::optional<CompareOp> comparison_op(const std::string& s) {
  if (s == "<=") return CompareOp::LE;
  if (s == "<") return CompareOp::LT;
  if (s == "=") return CompareOp::EQ;
  if (s == ">=") return CompareOp::GE;
  if (s == ">") return CompareOp::GT;
  return std::nullopt;
}

inline bool is_object_term(const SExpr& e) { return e.is_atom() && !parse_number(e.atom); }

inline bool is_timed(const SExpr& e) {
  if (e.size() < 2) return false;
  if (e[0].is_atom("at")) return e[1].is_atom("start") || e[1].is_atom("end");
  return e[0].is_atom("over") && e[1].is_atom("all");
}

inline void parse_condition_into(const SExpr& e, const Scope& scope, Condition& out) {
  expect_list(e, "condition");
  if (e.size() == 0) return;  // `()` is the empty conjunction
  const std::string& head = expect_symbol(e[0], "condition keyword or predicate");
  if (head == "and") {
    for (std::size_t i = 1; i < e.size(); ++i) parse_condition_into(e[i], scope, out);
    return;
  }
  if (head == "not") unsupported("negative-preconditions", e.pos);
  if (head == "or" || head == "imply") unsupported("disjunctive-preconditions", e.pos);
  if (head == "forall" || head == "exists") unsupported("quantified-preconditions", e.pos);
  if (is_timed(e)) unsupported("durative-actions", e.pos);
  if (auto op = comparison_op(head)) {
    if (e.size() != 3) syntax_error("comparison '" + head + "' takes two operands", e.pos);
    if (*op == CompareOp::EQ && is_object_term(e[1]) && is_object_term(e[2])) unsupported("equality", e.pos);
    out.comparisons.push_back({*op, parse_num_expr(e[1], scope), parse_num_expr(e[2], scope)});
    return;
  }
  out.atoms.push_back(parse_atom(e, scope, false));
}

inline std::optional<AssignOp> assign_op(const std::string& s) {
  if (s == "assign") return AssignOp::Assign;
  if (s == "increase") return AssignOp::Increase;
  if (s == "decrease") return AssignOp::Decrease;
  if (s == "scale-up") return AssignOp::ScaleUp;
  if (s == "scale-down") return AssignOp::ScaleDown;
  return std::nullopt;
}

inline void parse_effect_into(const SExpr& e, const Scope& scope, Effect& out) {
  expect_list(e, "effect");
  if (e.size() == 0) return;
  const std::string& head = expect_symbol(e[0], "effect keyword or predicate");
  if (head == "and") {
    for (std::size_t i = 1; i < e.size(); ++i) parse_effect_into(e[i], scope, out);
    return;
  }
  if (head == "when") unsupported("conditional-effects", e.pos);
  if (head == "forall") unsupported("quantified-effects", e.pos);
  if (is_timed(e)) unsupported("durative-actions", e.pos);
  if (head == "not") {
    if (e.size() != 2) syntax_error("'not' takes one atom", e.pos);
    out.del.push_back(parse_atom(e[1], scope, false));
    return;
  }
  if (auto op = assign_op(head)) {
    if (e.size() != 3) syntax_error("'" + head + "' takes a function and an expression", e.pos);
    out.numeric.push_back({*op, parse_atom(e[1], scope, true), parse_num_expr(e[2], scope)});
    return;
  }
  out.add.push_back(parse_atom(e, scope, false));
}

inline std::vector<Signature> parse_signatures(const SExpr& section, const Scope& scope, bool functions) {
  std::vector<Signature> out;
  for (std::size_t i = 1; i < section.size(); ++i) {
    const SExpr& item = section[i];
    if (item.is_atom("-")) {
      if (!functions || i + 1 >= section.size()) syntax_error("unexpected '-'", item.pos);
      const SExpr& type = section[i + 1];
      if (!type.is_atom("number")) unsupported("object-fluents", type.pos);
      ++i;
      continue;
    }
    expect_list(item, functions ? "function declaration" : "predicate declaration");
    if (item.size() == 0) syntax_error("empty declaration", item.pos);
    Signature sig;
    sig.name = expect_symbol(item[0], "name");
    sig.parameters = parse_typed_list(item, 1);
    for (const auto& p : sig.parameters) {
      if (!is_variable(p.name)) syntax_error("parameter '" + p.name + "' must start with '?'", item.pos);
      if (!scope.types.contains(p.type)) {
        throw Error(ErrorKind::UnknownObjectType, "unknown type '" + p.type + "'", p.type, item.pos);
      }
    }
    out.push_back(std::move(sig));
  }
  return out;
}

inline Scope domain_scope(const DomainAst& d) {
  Scope scope;
  for (const auto& t : d.types) {
    scope.types.insert(t.name);
    scope.types.insert(t.type);
  }
  for (const auto& c : d.constants) scope.objects.insert(c.name);
  for (const auto& p : d.predicates) scope.predicates[p.name] = p.parameters.size();
  for (const auto& f : d.functions) scope.functions[f.name] = f.parameters.size();
  return scope;
}

inline void check_header(const SExpr& root, const char* kind) {
  if (!root.has_head("define")) syntax_error("expected (define ...)", root.pos);
  if (root.size() < 2 || !root[1].has_head(kind) || root[1].size() != 2) {
    syntax_error(std::string("expected (") + kind + " <name>)", root.size() > 1 ? root[1].pos : root.pos);
  }
}

}  // namespace detail

inline DomainAst parse_domain(std::string_view text) {
  using namespace detail;
  const SExpr root = read_sexpr(text);
  check_header(root, "domain");
  DomainAst d;
  d.name = expect_symbol(root[1][1], "domain name");
  Scope scope;
  for (std::size_t i = 2; i < root.size(); ++i) {
    const SExpr& section = expect_list(root[i], "domain section");
    if (section.size() == 0) syntax_error("empty section", section.pos);
    const std::string& key = expect_symbol(section[0], "section keyword");
    if (key == ":requirements") {
      for (std::size_t j = 1; j < section.size(); ++j) {
        const std::string& r = expect_symbol(section[j], "requirement");
        if (r == ":durative-actions" || r == ":duration-inequalities" || r == ":continuous-effects") {
          unsupported("durative-actions", section[j].pos);
        }
        if (r == ":time") unsupported("processes", section[j].pos);
        d.requirements.push_back(r);
      }
    } else if (key == ":types") {
      d.types = parse_typed_list(section, 1);
      for (const auto& t : d.types) {
        scope.types.insert(t.name);
        scope.types.insert(t.type);
      }
    } else if (key == ":constants") {
      d.constants = parse_typed_list(section, 1);
      for (const auto& c : d.constants) {
        if (!scope.types.contains(c.type)) {
          throw Error(ErrorKind::UnknownObjectType, "unknown type '" + c.type + "'", c.type, section.pos);
        }
        if (!scope.objects.insert(c.name).second) {
          throw Error(ErrorKind::DuplicateObject, "duplicate constant '" + c.name + "'", c.name, section.pos);
        }
      }
    } else if (key == ":predicates") {
      d.predicates = parse_signatures(section, scope, false);
      for (const auto& p : d.predicates) scope.predicates[p.name] = p.parameters.size();
    } else if (key == ":functions") {
      d.functions = parse_signatures(section, scope, true);
      for (const auto& f : d.functions) scope.functions[f.name] = f.parameters.size();
    } else if (key == ":action") {
      ActionSchema a;
      if (section.size() < 2) syntax_error("action without a name", section.pos);
      a.name = expect_symbol(section[1], "action name");
      Scope local = scope;
      std::size_t j = 2;
      while (j < section.size()) {
        const std::string& field = expect_symbol(section[j], "action field");
        if (j + 1 >= section.size()) syntax_error("missing value for " + field, section[j].pos);
        const SExpr& value = section[j + 1];
        if (field == ":parameters") {
          a.parameters = parse_typed_list(expect_list(value, "parameter list"), 0);
          for (const auto& p : a.parameters) {
            if (!is_variable(p.name)) syntax_error("parameter '" + p.name + "' must start with '?'", value.pos);
            if (!local.types.contains(p.type)) {
              throw Error(ErrorKind::UnknownObjectType, "unknown type '" + p.type + "'", p.type, value.pos);
            }
            local.variables.insert(p.name);
          }
        } else if (field == ":precondition") {
          parse_condition_into(value, local, a.precondition);
        } else if (field == ":effect") {
          parse_effect_into(value, local, a.effect);
        } else if (field == ":duration") {
          unsupported("durative-actions", section[j].pos);
        } else {
          syntax_error("unknown action field '" + field + "'", section[j].pos);
        }
        j += 2;
      }
      d.actions.push_back(std::move(a));
    } else if (key == ":durative-action") {
      unsupported("durative-actions", section.pos);
    } else if (key == ":derived") {
      unsupported("derived-predicates", section.pos);
    } else if (key == ":process") {
      unsupported("processes", section.pos);
    } else if (key == ":event") {
      unsupported("events", section.pos);
    } else if (key == ":constraints") {
      unsupported("constraints", section.pos);
    } else {
      syntax_error("unknown domain section '" + key + "'", section.pos);
    }
  }
  return d;
}

inline ProblemAst parse_problem(std::string_view text, const DomainAst& domain) {
  using namespace detail;
  const SExpr root = read_sexpr(text);
  check_header(root, "problem");
  ProblemAst p;
  p.name = expect_symbol(root[1][1], "problem name");
  Scope scope = domain_scope(domain);
  bool have_goal = false;
  for (std::size_t i = 2; i < root.size(); ++i) {
    const SExpr& section = expect_list(root[i], "problem section");
    if (section.size() == 0) syntax_error("empty section", section.pos);
    const std::string& key = expect_symbol(section[0], "section keyword");
    if (key == ":domain") {
      if (section.size() != 2) syntax_error("expected (:domain <name>)", section.pos);
      p.domain_name = expect_symbol(section[1], "domain name");
      if (p.domain_name != domain.name) {
        p.warnings.push_back("problem declares domain '" + p.domain_name + "' but domain is '" + domain.name + "'");
      }
    } else if (key == ":requirements") {
      // Repeated domain requirements carry no extra information.
    } else if (key == ":objects") {
      p.objects = parse_typed_list(section, 1);
      for (const auto& o : p.objects) {
        if (!scope.types.contains(o.type)) {
          throw Error(ErrorKind::UnknownObjectType, "object '" + o.name + "' has unknown type '" + o.type + "'",
                      o.type, section.pos);
        }
        if (!scope.objects.insert(o.name).second) {
          throw Error(ErrorKind::DuplicateObject, "duplicate object '" + o.name + "'", o.name, section.pos);
        }
      }
    } else if (key == ":init") {
      for (std::size_t j = 1; j < section.size(); ++j) {
        const SExpr& item = expect_list(section[j], "initial fact");
        if (item.has_head("=")) {
          if (item.size() != 3) syntax_error("expected (= (f args) value)", item.pos);
          const auto v = item[2].is_atom() ? parse_number(item[2].atom) : std::nullopt;
          if (!v) syntax_error("initial function value must be a number", item[2].pos);
          p.init_values.push_back({parse_atom(item[1], scope, true), *v});
        } else if (item.has_head("at") && item.size() == 3 && item[1].is_atom() && parse_number(item[1].atom)) {
          unsupported("timed-initial-literals", item.pos);
        } else if (item.has_head("not")) {
          // Closed-world: negative initial facts are implicit.
        } else {
          p.init_atoms.push_back(parse_atom(item, scope, false));
        }
      }
    } else if (key == ":goal") {
      if (section.size() != 2) syntax_error("expected (:goal <formula>)", section.pos);
      parse_condition_into(section[1], scope, p.goal);
      have_goal = true;
    } else if (key == ":metric") {
      p.has_metric = true;
      p.warnings.push_back(":metric is ignored (satisficing, unit-cost search)");
    } else if (key == ":constraints") {
      unsupported("constraints", section.pos);
    } else {
      syntax_error("unknown problem section '" + key + "'", section.pos);
    }
  }
  if (!have_goal) syntax_error("problem has no :goal", root.pos);
  return p;
}

}  // namespace numplan::pddl
