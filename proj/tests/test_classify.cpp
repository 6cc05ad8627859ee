#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "remrec/classify.hpp"
#include "remrec/integrate.hpp"
#include "remrec/random.hpp"

using namespace remrec;

namespace {

// Brute force: every grid point, straight through Trajectory::at.
double brute_sup(const Trajectory& tr, double tau, double T, double T2, double delta) {
  double best = 0.0;
  const auto lo = static_cast<long>(std::ceil((T - tr.t0()) / delta - 1e-9));
  const auto hi = static_cast<long>(std::floor((T2 - tr.t0()) / delta + 1e-9));
  for (long j = lo; j <= hi; ++j) {
    const double t = tr.t0() + static_cast<double>(j) * delta;
    best = std::max(best, std::fabs(tr.at(t + tau) - tr.at(t)));
  }
  return best;
}

Trajectory quasi(double t1) { return sample_function("sin(t)+sin(sqrt(2)*t)", {}, 0.0, t1, 0.05); }

}  // namespace

TEST_CASE("tail_sup equals the brute-force grid maximum") {
  const auto tr = quasi(400.0);
  UniformStream r(3);
  for (int i = 0; i < 40; ++i) {
    const double tau = r.between(0.0, 50.0);
    const double T = r.between(0.0, 200.0);
    const double T2 = T + r.between(1.0, 140.0);
    const double delta = (i % 2 == 0) ? 0.05 : 0.0137;
    CAPTURE(tau);
    CHECK(tail_sup(tr, tau, T, T2, delta) == doctest::Approx(brute_sup(tr, tau, T, T2, delta)).epsilon(1e-12));
  }
}

TEST_CASE("discrete trajectories: exact for integer shifts") {
  std::vector<double> v;
  UniformStream r(11);
  for (int k = 0; k < 3000; ++k) v.push_back(r.between(-1, 1));
  const Trajectory tr(TimeKind::Discrete, 0.0, 1.0, v);
  for (int tau : {0, 1, 7, 100}) CHECK(tail_sup(tr, tau, 10, 2500, 1.0) == brute_sup(tr, tau, 10, 2500, 1.0));
  CHECK_THROWS_AS(tail_sup(tr, 1.5, 0, 10, 1.0), std::invalid_argument);
}

TEST_CASE("tail sup is monotone in the window") {
  const auto tr = quasi(600.0);
  const double a = tail_sup(tr, 3.3, 100, 200, 0.05);
  const double b = tail_sup(tr, 3.3, 50, 300, 0.05);
  CHECK(b >= a);
}

TEST_CASE("scale equivariance with c = 2 and time-shift invariance") {
  const auto tr = quasi(500.0);
  const double base = tail_sup(tr, 4.1, 30, 300, 0.05);
  CHECK(tail_sup(tr.scaled(2.0), 4.1, 30, 300, 0.05) == doctest::Approx(2.0 * base).epsilon(1e-12));
  const auto shifted = tr.time_shifted(10.0);
  CHECK(tail_sup(shifted, 4.1, 20, 290, 0.05) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("window outside the span is refused with the needed span") {
  const auto tr = quasi(100.0);
  CHECK_THROWS_AS(tail_sup(tr, 10.0, 50, 95, 0.05), SpanError);
  CHECK_THROWS_AS(tail_sup(tr, -1.0, 0, 10, 0.05), std::invalid_argument);
}

TEST_CASE("geometric schedule") {
  const auto s = WindowSchedule::geometric(100, 10, 5e4);
  REQUIRE(s.windows.size() == 3);
  CHECK(s.windows[0].start == 100);
  CHECK(s.windows[1].start == 1000);
  CHECK(s.windows[2].end == 5e4);
  CHECK_THROWS_AS(WindowSchedule::geometric(100, 1.0, 1e4), ScheduleError);
}

TEST_CASE("relative density") {
  const auto d = relative_density({0.0, 3.0, 10.0}, 0.0, 12.0, 7.5);
  CHECK(d.largest_gap == 7.0);
  CHECK(d.l_min == 7.0);
  CHECK(d.verdict == Verdict::Pass);
  CHECK(relative_density({0.0, 3.0, 10.0}, 0.0, 12.0, 6.0).verdict == Verdict::Fail);
  CHECK(relative_density({5.0}, 0.0, 12.0, 6.0).l_min == 7.0);
}

TEST_CASE("remote test follows the window sups of a decaying signal") {
  const auto tr = sample_function("exp(-t/200)*sin(t)", {}, 0.0, 3000.0, 0.05);
  const auto s = WindowSchedule::geometric(100, 3, 2900);
  const auto r = remote_tau_periodic_test(tr, 1.0, 0.05, s);
  CHECK(r.verdict == Verdict::Pass);
  REQUIRE(r.L);
  for (std::size_t i = 1; i < r.curve.sups.size(); ++i) CHECK(r.curve.sups[i] <= r.curve.sups[i - 1]);
  const double L = *r.L;
  for (std::size_t i = 0; i < r.curve.windows.size(); ++i)
    CHECK((r.curve.sups[i] <= 0.05) == (r.curve.windows[i].start >= L));
  CHECK(remote_tau_periodic_test(sample_function("sin(t)", {}, 0, 3000, 0.05), 1.0, 0.05, s).verdict == Verdict::Fail);
}

TEST_CASE("global scan on sin matches brute force") {
  const auto tr = sample_function("sin(t)", {}, 0.0, 200.0, 0.05);
  TauRange range{0.0, 20.0, 0.01};
  const auto set = almost_period_scan(tr, 0.05, ScanMode::Global, range, {});
  std::vector<double> brute;
  for (std::size_t i = 0; i < range.count(); ++i) {
    const double tau = range.at(i);
    if (brute_sup(tr, tau, 0.0, 200.0 - 20.0, 0.05) <= 0.05) brute.push_back(tau);
  }
  auto got = set.taus();
  got.erase(std::remove_if(got.begin(), got.end(),
                           [&](double t) { return std::fabs(t / 0.01 - std::round(t / 0.01)) > 1e-6; }),
            got.end());
  REQUIRE(got.size() == brute.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(brute[i]));
}

TEST_CASE("asymptotic test needs twenty periods") {
  const auto tr = sample_function("sin(t)", {}, 0.0, 100.0, 0.05);
  CHECK_THROWS_AS(asymptotic_tau_periodic_test(tr, 2 * M_PI, 1e-3), SpanError);
  const auto longer = sample_function("sin(t)", {}, 0.0, 400.0, 0.01);
  CHECK(asymptotic_tau_periodic_test(longer, 2 * M_PI, 1e-3).verdict == Verdict::Pass);
  CHECK(asymptotic_tau_periodic_test(longer, 1.0, 1e-3).verdict == Verdict::Fail);
}

TEST_CASE("default probes are reproducible and integer for maps") {
  const auto a = default_probes(TimeKind::Continuous, 12345);
  CHECK(a == default_probes(TimeKind::Continuous, 12345));
  REQUIRE(a.size() == 5);
  CHECK(a[1] == std::sqrt(2.0));
  for (double p : default_probes(TimeKind::Discrete, 12345)) CHECK(p == std::ceil(p));
}

TEST_CASE("classification of a periodic signal is consistent") {
  const auto tr = sample_function("sin(t)", {}, 0.0, 3000.0, 0.01);
  ClassifyConfig c;
  c.range.hi = 20.0;
  c.density_window = 10.0;
  c.threads = 4;
  const auto rep = classify_trajectory(tr, 0.05, c);
  CHECK(rep.hierarchy_consistent);
  CHECK(rep.tau == doctest::Approx(2 * M_PI).epsilon(1e-4));
  CHECK(rep.verdict("tau_periodic") == Verdict::Pass);
  CHECK(rep.verdict("almost_periodic") == Verdict::Pass);
  CHECK(rep.verdict("remotely_stationary") == Verdict::Fail);
  CHECK(hierarchy_violations(rep).empty());
}

TEST_CASE("hierarchy_violations spots a pass/fail contradiction") {
  ClassificationReport rep;
  for (const auto& n : class_names()) rep.classes.push_back({n, Verdict::Inconclusive, ""});
  for (auto& c : rep.classes) {
    if (c.name == "stationary") c.verdict = Verdict::Pass;
    if (c.name == "tau_periodic") c.verdict = Verdict::Fail;
  }
  CHECK(hierarchy_violations(rep).size() == 1);
}

TEST_CASE("separation constancy for a contracting ODE") {
  IntegratorConfig c;
  c.output_step = 0.05;
  const auto r = separation_constancy_test(ScalarField::ode("-x+sin(t)"), 1.0, 3.0, 0.0, 60.0, {40.0, 60.0}, 1e-8, c);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.C < 1e-8);
}
