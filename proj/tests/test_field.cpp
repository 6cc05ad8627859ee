#include <cmath>

#include "doctest.h"
#include "remrec/field.hpp"

using namespace remrec;

TEST_CASE("ode field evaluates with bound parameters") {
  const auto f = ScalarField::ode("-k*x+sin(t)", {{"k", 2.0}});
  CHECK(f.kind() == TimeKind::Continuous);
  CHECK(f(1.0, 3.0) == doctest::Approx(-6.0 + std::sin(1.0)));
}

TEST_CASE("unbound parameter or bad text is a FieldError") {
  CHECK_THROWS_AS(ScalarField::ode("-k*x"), FieldError);
  CHECK_THROWS_AS(ScalarField::ode("-x+"), FieldError);
}

TEST_CASE("shifted field reads f(t+h, x)") {
  const auto f = ScalarField::ode("t*x");
  const auto g = f.shifted(2.5);
  CHECK(g.shift() == 2.5);
  CHECK(g(1.0, 2.0) == f(3.5, 2.0));
  CHECK(shift_field(g, 1.0)(0.0, 1.0) == f(3.5, 1.0));
}

TEST_CASE("map fields only take integer times") {
  const auto f = ScalarField::map("x/2+n");
  CHECK(f.kind() == TimeKind::Discrete);
  CHECK(f(3.0, 4.0) == 5.0);
  CHECK_THROWS(f(0.5, 1.0));
}

TEST_CASE("sequences: expression in n and periodic list") {
  const auto s = Sequence::from_expression("K", "10+n");
  CHECK(s.at(3.0) == 13.0);
  const auto l = Sequence::from_list("K", {9.0, 11.0});
  CHECK(l.is_list());
  CHECK(l.at(0.0) == 9.0);
  CHECK(l.at(1.0) == 11.0);
  CHECK(l.at(4.0) == 9.0);
  CHECK_THROWS_AS(Sequence::from_expression("K", "x+n"), FieldError);
  CHECK_THROWS_AS(Sequence::from_list("K", {}), FieldError);
}

TEST_CASE("sequence bound into a map right-hand side") {
  FieldSpec spec;
  spec.kind = TimeKind::Discrete;
  spec.rhs = "K*x/(K+x)";
  spec.sequences.push_back(Sequence::from_list("K", {2.0, 4.0}));
  spec.state = StateDomain::nonnegative();
  const ScalarField f(spec);
  CHECK(f(0.0, 2.0) == 1.0);
  CHECK(f(1.0, 4.0) == 2.0);
  CHECK(f.admissible(0.0, 1.0));
  CHECK_FALSE(f.admissible(0.0, -1.0));
}

TEST_CASE("guard expression restricts admissibility") {
  FieldSpec spec;
  spec.rhs = "1/(1+x)";
  spec.guard = "1+x";
  spec.state = StateDomain::nonnegative();
  const ScalarField f(spec);
  CHECK(f.admissible(0.0, 0.0));
  CHECK_FALSE(f.admissible(0.0, -2.0));
}
