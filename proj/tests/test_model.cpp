#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "numplan/model.hpp"
#include "numplan/semantics.hpp"

using namespace numplan;

namespace {

NumExpr x(VarIndex i) { return NumExpr::var(i); }
NumExpr c(double v) { return NumExpr::constant(v); }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

}  // namespace

TEST(BuildTask, EmptyPlanInstance) {
  NumericTask t = build_task({}, {"x"}, {}, State({}, {0.0}), {{}, {{x(0), Comparator::GE}}});
  EXPECT_EQ(t.num_variables(), 1u);
  EXPECT_TRUE(satisfies_goal(t.initial(), t));
}

TEST(BuildTask, DuplicateNumericEffect) {
  GroundAction a{"a", {}, {}, {}, {{0, c(1)}, {0, c(2)}}};
  EXPECT_EQ(kind_of([&] { build_task({}, {"x"}, {a}, State({}, {0.0}), {}); }), ErrorKind::DuplicateEffect);
}

TEST(BuildTask, DuplicateBooleanEffect) {
  GroundAction a{"a", {}, {}, {{0, true}, {0, false}}, {}};
  EXPECT_EQ(kind_of([&] { build_task({"p"}, {}, {a}, State({false}, {}), {}); }), ErrorKind::DuplicateEffect);
}

TEST(BuildTask, GoalIndexOutOfRange) {
  GoalCondition g{{}, {{x(5), Comparator::GE}}};
  EXPECT_EQ(kind_of([&] { build_task({}, {"x", "y"}, {}, State({}, {0.0, 0.0}), g); }), ErrorKind::IndexOutOfRange);
}

TEST(BuildTask, ActionIndicesChecked) {
  GroundAction bad_pre{"a", {3}, {}, {}, {}};
  EXPECT_EQ(kind_of([&] { build_task({"p"}, {}, {bad_pre}, State({false}, {}), {}); }), ErrorKind::IndexOutOfRange);
  GroundAction bad_rhs{"a", {}, {}, {}, {{0, x(1)}}};
  EXPECT_EQ(kind_of([&] { build_task({}, {"x"}, {bad_rhs}, State({}, {0.0}), {}); }), ErrorKind::IndexOutOfRange);
  GroundAction bad_lhs{"a", {}, {}, {}, {{2, c(0)}}};
  EXPECT_EQ(kind_of([&] { build_task({}, {"x"}, {bad_lhs}, State({}, {0.0}), {}); }), ErrorKind::IndexOutOfRange);
}

TEST(BuildTask, InitialStateMustBeTotal) {
  EXPECT_EQ(kind_of([&] { build_task({"p"}, {"x"}, {}, State({false}, {}), {}); }), ErrorKind::NonTotalInitialState);
}

TEST(State, NegativeZeroIsCanonical) {
  State a({true}, {-0.0, 1.0});
  State b({true}, {0.0, 1.0});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_FALSE(std::signbit(a.numeric(0)));
  a.set_numeric(1, -0.0);
  b.set_numeric(1, 0.0);
  EXPECT_EQ(a, b);
}

TEST(State, NonFiniteRejected) {
  EXPECT_EQ(kind_of([] { State({}, {std::nan("")}); }), ErrorKind::NonFiniteValue);
  EXPECT_EQ(kind_of([] { State({}, {std::numeric_limits<double>::infinity()}); }), ErrorKind::NonFiniteValue);
  State s({}, {1.0});
  EXPECT_EQ(kind_of([&] { s.set_numeric(0, -std::numeric_limits<double>::infinity()); }), ErrorKind::NonFiniteValue);
}

TEST(State, EqualityIsBitExact) {
  EXPECT_NE(State({}, {0.1 + 0.2}), State({}, {0.3}));
  EXPECT_NE(State({true}, {1.0}), State({false}, {1.0}));
}

TEST(State, EquivalenceAndHashProperty) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> v(-2, 2);
  std::vector<State> states;
  for (int i = 0; i < 200; ++i) {
    states.emplace_back(std::vector<bool>{v(rng) > 0}, std::vector<double>{v(rng) * 0.5, v(rng) == 0 ? -0.0 : 1.0});
  }
  for (const auto& a : states) {
    EXPECT_EQ(a, a);
    for (const auto& b : states) {
      EXPECT_EQ(a == b, b == a);
      if (a == b) {
        EXPECT_EQ(a.hash(), b.hash());
      }
      for (int k = 0; k < 3; ++k) {
        const auto& c3 = states[static_cast<std::size_t>(k)];
        if (a == b && b == c3) {
          EXPECT_EQ(a, c3);
        }
      }
    }
  }
}

TEST(NumExpr, StructuralEquality) {
  EXPECT_EQ(NumExpr::add(x(0), c(1)), NumExpr::add(x(0), c(1)));
  EXPECT_FALSE(NumExpr::add(x(0), c(1)) == NumExpr::add(c(1), x(0)));
  std::vector<VarIndex> seen;
  NumExpr::mul(x(2), NumExpr::div(x(0), c(3))).for_each_var([&](VarIndex i) { seen.push_back(i); });
  EXPECT_EQ(seen, (std::vector<VarIndex>{2, 0}));
}

TEST(NumericTask, NotMutatedBySemantics) {
  GroundAction a{"inc", {}, {}, {}, {{0, NumExpr::add(x(0), c(1))}}};
  NumericTask t = build_task({}, {"x"}, {a}, State({}, {0.0}), {{}, {{NumExpr::sub(x(0), c(2)), Comparator::GE}}});
  const State before = t.initial();
  auto s = apply(t.action(0), t.initial());
  ASSERT_TRUE(s);
  (void)validate_plan(t, Plan{{0, 0}});
  EXPECT_EQ(t.initial(), before);
  EXPECT_EQ(t.action(0).eff_num.size(), 1u);
}
