#include <cmath>
#include <vector>

#include "doctest.h"
#include "remrec/integrate.hpp"

using namespace remrec;

namespace {

double massera(double t, double x0) { return (std::sin(t) - std::cos(t)) / 2 + (x0 + 0.5) * std::exp(-t); }

}  // namespace

TEST_CASE("rkf45 matches the closed form of u' = -u + sin t") {
  IntegratorConfig c;
  c.abs_tol = c.rel_tol = 1e-10;
  c.output_step = 0.05;
  const auto tr = integrate(ScalarField::ode("-x+sin(t)"), 2.0, 0.0, 30.0, c);
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) worst = std::max(worst, std::fabs(tr.values()[k] - massera(tr.time(k), 2.0)));
  CHECK(worst < 1e-8);
  CHECK(tr.t_end() >= 30.0 - 1e-9);
  CHECK(tr.derivatives()[10] == doctest::Approx(-tr.values()[10] + std::sin(tr.time(10))));
}

TEST_CASE("fixed rk4 converges at fourth order") {
  const auto f = ScalarField::ode("-x+sin(t)");
  auto err = [&](double h) {
    IntegratorConfig c;
    c.method = Method::Rk4Fixed;
    c.max_step = h;
    c.output_step = 0.5;
    const auto tr = integrate(f, 1.0, 0.0, 5.0, c);
    return std::fabs(tr.values().back() - massera(tr.t_end(), 1.0));
  };
  const double e1 = err(0.1);
  const double e2 = err(0.05);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("integrate_many equals separate runs at the nodes") {
  IntegratorConfig c;
  c.output_step = 0.1;
  const auto f = ScalarField::ode("-x+sin(t)");
  const std::vector<double> u0 = {-3.0, 0.0, 4.0};
  const auto many = integrate_many(f, u0, 0.0, 10.0, c);
  REQUIRE(many.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < many[i].size(); k += 7)
      CHECK(many[i].values()[k] == doctest::Approx(massera(many[i].time(k), u0[i])).epsilon(1e-8));
  }
}

TEST_CASE("blow-up aborts with the last good time") {
  IntegratorConfig c;
  c.output_step = 0.01;
  try {
    integrate(ScalarField::ode("x^2"), 1.0, 0.0, 5.0, c);
    FAIL("no throw");
  } catch (const IntegrationError& e) {
    CHECK(e.last_good_time() <= 1.0);
    CHECK(e.last_good_time() > 0.9);
  }
}

TEST_CASE("iterate applies the map exactly") {
  const auto tr = iterate(ScalarField::map("x/2+1"), 0.0, 4);
  REQUIRE(tr.size() == 5);
  CHECK(tr.values() == std::vector<double>{0.0, 1.0, 1.5, 1.75, 1.875});
  CHECK_THROWS(iterate(ScalarField::ode("x"), 0.0, 3));
  CHECK_THROWS(integrate(ScalarField::map("x"), 0.0, 0.0, 1.0, {}));
}

TEST_CASE("sample_function puts the function values on the grid") {
  const auto tr = sample_function("sin(t)", {}, 0.0, 10.0, 0.1);
  CHECK(tr.size() == 101);
  CHECK(tr.values()[37] == std::sin(tr.time(37)));
  CHECK(tr.derivatives()[37] == doctest::Approx(std::cos(tr.time(37))).epsilon(1e-6));
}

TEST_CASE("config validation") {
  IntegratorConfig c;
  c.abs_tol = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK(parse_method("rk4") == Method::Rk4Fixed);
  CHECK(parse_method("rkf45") == Method::Rkf45);
  CHECK_THROWS_AS(parse_method("euler"), std::invalid_argument);
}
