#pragma once

#include <string>

#include "numplan/error.hpp"

namespace numplan::bench {

struct GeneratedInstance {
  std::string domain_name;
  std::string problem_name;
  std::string domain_pddl;
  std::string problem_pddl;
};

// Counters family: n counters with values in [0, max_int] that must end in
// strictly increasing order.
inline GeneratedInstance generate_counters(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidConfig, "counters instance needs n >= 1");
  GeneratedInstance g;
  g.domain_name = "counters";
  g.problem_name = "counters-" + std::to_string(n);
  g.domain_pddl = R"((define (domain counters)
  (:requirements :typing :numeric-fluents)
  (:types counter)
  (:functions (value ?c - counter) - number
              (max_int) - number)
  (:action increment
    :parameters (?c - counter)
    :precondition (and (<= (+ (value ?c) 1) (max_int)))
    :effect (and (increase (value ?c) 1)))
  (:action decrement
    :parameters (?c - counter)
    :precondition (and (>= (value ?c) 1))
    :effect (and (decrease (value ?c) 1)))
)
)";
  std::string p = "(define (problem " + g.problem_name + ")\n  (:domain counters)\n  (:objects";
  for (int i = 0; i < n; ++i) p += " c" + std::to_string(i);
  p += " - counter)\n  (:init (= (max_int) " + std::to_string(2 * n) + ")";
  // Descending start values, so some counters must go down.
  for (int i = 0; i < n; ++i) p += "\n    (= (value c" + std::to_string(i) + ") " + std::to_string(n - 1 - i) + ")";
  p += ")\n  (:goal (and";
  for (int i = 0; i + 1 < n; ++i) {
    p += "\n    (<= (+ (value c" + std::to_string(i) + ") 1) (value c" + std::to_string(i + 1) + "))";
  }
  p += ")))\n";
  g.problem_pddl = std::move(p);
  return g;
}

// Farmland family: n farms on a line, all workers start on the first farm and
// every farm needs at least one.
inline GeneratedInstance generate_farmland(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidConfig, "farmland instance needs n >= 2");
  GeneratedInstance g;
  g.domain_name = "farmland";
  g.problem_name = "farmland-" + std::to_string(n);
  g.domain_pddl = R"((define (domain farmland)
  (:requirements :typing :numeric-fluents)
  (:types farm)
  (:predicates (adj ?a - farm ?b - farm))
  (:functions (x ?f - farm) - number)
  (:action move
    :parameters (?a - farm ?b - farm)
    :precondition (and (adj ?a ?b) (>= (x ?a) 1))
    :effect (and (decrease (x ?a) 1) (increase (x ?b) 1)))
)
)";
  std::string p = "(define (problem " + g.problem_name + ")\n  (:domain farmland)\n  (:objects";
  for (int i = 0; i < n; ++i) p += " f" + std::to_string(i);
  p += " - farm)\n  (:init";
  for (int i = 0; i + 1 < n; ++i) {
    const std::string a = "f" + std::to_string(i);
    const std::string b = "f" + std::to_string(i + 1);
    p += "\n    (adj " + a + " " + b + ") (adj " + b + " " + a + ")";
  }
  for (int i = 0; i < n; ++i) {
    p += "\n    (= (x f" + std::to_string(i) + ") " + std::to_string(i == 0 ? 2 * n : 0) + ")";
  }
  p += ")\n  (:goal (and";
  for (int i = 0; i < n; ++i) p += " (>= (x f" + std::to_string(i) + ") 1)";
  p += ")))\n";
  g.problem_pddl = std::move(p);
  return g;
}

inline GeneratedInstance generate(const std::string& family, int n) {
  if (family == "counters") return generate_counters(n);
  if (family == "farmland") return generate_farmland(n);
  throw Error(ErrorKind::InvalidConfig, "unknown generator family '" + family + "' (counters, farmland)");
}

}  // namespace numplan::bench
