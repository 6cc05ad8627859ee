#include "remrec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "remrec/catalog.hpp"
#include "remrec/classify.hpp"
#include "remrec/integrate.hpp"
#include "remrec/properties.hpp"

namespace remrec {

bool SuiteResult::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.ok; });
}

const std::vector<SuiteInfo>& suites() {
  static const std::vector<SuiteInfo> s{
      {"contraction", "contraction", "separation of solutions never grows (ODE and Beverton-Holt)"},
      {"counterexample", "exAAP1-counterexample", "cube-root phase example: oracle, witnesses, slow tail decay"},
      {"beverton-holt", "thBH1-beverton-holt", "Beverton-Holt flags, bounds and remote stationarity"},
      {"periodic", "thI2-periodic", "-x+sin(t): asymptotic and remote 2pi-periodicity"},
      {"monotone", "thI3-monotone", "monotonicity directions and order preservation"},
  };
  return s;
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

class Suite {
 public:
  explicit Suite(std::string name) { r_.suite = std::move(name); }
  void check(std::string property, bool ok, std::string detail) {
    r_.checks.push_back({std::move(property), ok, std::move(detail)});
  }
  SuiteResult done() { return std::move(r_); }

 private:
  SuiteResult r_;
};

IntegratorConfig tight(double tol, double dt = 0.01) {
  IntegratorConfig c;
  c.abs_tol = tol;
  c.rel_tol = tol;
  c.output_step = dt;
  return c;
}

BevertonHolt default_bh() {
  BevertonHoltParams p;
  p.mu = 2.0;
  p.K_expr = "10+sin(ln(1+n))";
  p.alpha = 9.0;
  p.beta = 11.0;
  return make_beverton_holt(p);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

SuiteResult contraction(std::uint64_t seed) {
  Suite s("contraction");
  UniformStream rng(seed);
  for (const char* forcing : {"sin(t)", "sin(t)+sin(sqrt(2)*t)", "sin(ln(1+t))"}) {
    const auto field = ScalarField::ode(std::string("-x+") + forcing);
    int monotone_fail = 0;
    double worst_ratio = 0.0;
    double worst_end = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double u[] = {rng.between(-10, 10), rng.between(-10, 10)};
      const double d0 = std::fabs(u[0] - u[1]);
      const auto tr = integrate_many(field, u, 0.0, 20.0, tight(1e-10));
      const auto res = contraction_gap(tr[0], tr[1]);
      const auto& g = res.series.gaps;
      for (std::size_t k = 1; k < g.size(); ++k)
        if (g[k] > g[k - 1] + 1e-9) {
          ++monotone_fail;
          break;
        }
      worst_ratio = std::max(worst_ratio, res.report.extreme);
      worst_end = std::max(worst_end, g.back() / (d0 * std::exp(-20.0)));
    }
    s.check(std::string("gap of -x+") + forcing + " non-increasing within 1e-9 (100 pairs)", monotone_fail == 0,
            std::to_string(monotone_fail) + " pairs violate; worst gap ratio " + num(worst_ratio));
    s.check(std::string("gap(20) <= |u1-u2| e^-20 (1+1e-3) for -x+") + forcing, worst_end <= 1.0 + 1e-3,
            "worst gap(20) / (|u1-u2| e^-20) = " + num(worst_end));
  }

  const auto bh = default_bh();
  int violations = 0;
  double worst = 0.0;
  Witness first{};
  for (int i = 0; i < 100; ++i) {
    const double v1 = rng.between(1, 25);
    const double v2 = rng.between(1, 25);
    const auto a = iterate(bh.field, v1, 10000);
    const auto b = iterate(bh.field, v2, 10000);
    const double d0 = std::fabs(v1 - v2);
    double prev = d0;
    bool bad = false;
    for (std::size_t n = 0; n < a.size(); ++n) {
      const double g = std::fabs(a.values()[n] - b.values()[n]);
      worst = std::max(worst, g / d0);
      if ((g > d0 || g > prev) && !bad) {
        bad = true;
        if (violations == 0) first = {static_cast<double>(n), v1, v2};
      }
      prev = g;
    }
    violations += bad;
  }
  s.check("Beverton-Holt mu=2 gap <= |v1-v2| and non-increasing for n <= 1e4 (100 pairs in [1,25])",
          violations == 0,
          std::to_string(violations) + " pairs violate; worst gap ratio " + num(worst) +
              (violations ? "; first at n=" + num(first.t) + " v=(" + num(first.a) + ", " + num(first.b) + ")" : ""));
  return s.done();
}

SuiteResult counterexample() {
  Suite s("counterexample");
  const auto& ex = find_example("exAAP1");
  double worst = 0.0;
  for (int k = 1; k <= 5; ++k) {
    const auto [t1, t2] = nonasymptotic_witnesses(k);
    worst = std::max({worst, std::fabs(oracle_value(ex, t1)), std::fabs(oracle_value(ex, t2) - 1.0)});
  }
  s.check("closed form equals x0 at t_k^1 and x0+1 at t_k^2, k=1..5", worst <= 1e-10, "max deviation " + num(worst));

  const auto traj = integrate(example_field(ex), 0.0, 0.0, 200.0, tight(1e-9));
  double err = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) err = std::max(err, std::fabs(traj.values()[k] - oracle_value(ex, traj.time(k))));
  s.check("integrated solution matches the closed form on [0,200]", err <= 1e-6, "max error " + num(err));

  const auto long_run = integrate(example_field(ex), 0.0, 0.0, 1e5 + 3.0, tight(1e-10, 0.1));
  const auto asym = asymptotic_tau_periodic_test(long_run, 1.0, 0.3);
  s.check("phi(k) keeps oscillating: asymptotic 1-periodicity fails at eps=0.3", asym.verdict == Verdict::Fail,
          "spread over the last quarter " + num(asym.spread));

  auto schedule = WindowSchedule::geometric(1e3, 10.0, 1e5);
  const auto rt = remote_tau_periodic_test(long_run, 3.0, 0.12, schedule);
  std::string sups;
  for (double v : rt.curve.sups) sups += (sups.empty() ? "" : ", ") + num(v);
  bool within = !rt.curve.sups.empty();
  for (std::size_t i = 0; i < rt.curve.sups.size(); ++i)
    within = within && rt.curve.sups[i] <= 0.12 && (i == 0 || rt.curve.sups[i] <= rt.curve.sups[i - 1]);
  s.check("tau=3 tail sups on [1e3,1e4], [1e4,1e5] <= 0.12 and non-increasing", within,
          "sups " + sups + "; remote test " + to_string(rt.verdict));

  double slack = -1.0;
  for (double t = 1.0; t <= 1e4; t *= 1.7)
    for (double tau : {0.5, 1.0, 3.0, 10.0})
      slack = std::max(slack, std::fabs(oracle_value(ex, t + tau) - oracle_value(ex, t)) - tail_bound(ex, t, tau) * (1 + 1e-9));
  s.check("tail bound dominates |phi(t+tau)-phi(t)| on sampled (t, tau)", slack <= 0.0, "largest excess " + num(slack));
  return s.done();
}

SuiteResult beverton_holt() {
  Suite s("beverton-holt");
  const auto bh = default_bh();
  s.check("contraction condition mu beta^2/alpha^2 <= 1 is flagged as failing for mu=2, alpha=9, beta=11",
          !bh.c3 && bh.mu_above_one, "mu beta^2/alpha^2 = " + num(bh.lipschitz_bound) + ", mu > 1");

  BevertonHoltParams pc;
  pc.mu = 2.0;
  pc.K = 10.0;
  const auto constant = make_beverton_holt(pc);
  const auto fixed = iterate(constant.field, 10.0, 100);
  double dev = 0.0;
  for (double v : fixed.values()) dev = std::max(dev, std::fabs(v - 10.0));
  s.check("K_n = 10 is a fixed point for 100 steps", dev <= 1e-12, "max deviation " + num(dev));

  const auto ts = linspace(0, 1000, 101);
  const auto mono = check_monotone_in_x(bh.field, ts, linspace(0, 50, 201), Direction::NonDecreasing);
  s.check("f(n, .) non-decreasing on [0,50]", mono.passed(), "largest decrease " + num(mono.extreme));
  const auto lip = check_lipschitz_one(bh.field, ts, linspace(5, 25, 81));
  s.check("empirical Lipschitz constant on [5,25] below 1", lip.passed() && lip.extreme < 1.0,
          "max ratio " + num(lip.extreme));

  for (double u0 : {1.0, 5.0, 20.0}) {
    const auto orbit = iterate(bh.field, u0, 100000);
    const auto bound = boundedness(orbit, *bh.limsup_bound, 100.0);
    s.check("orbit from " + num(u0) + " stays below mu beta/(mu-1) = 22 for n >= 100", bound.passed(),
            "tail sup " + num(bound.extreme));
    const auto probes = default_probes(TimeKind::Discrete, kDefaultSeed);
    const auto schedule = default_schedule(orbit, *std::max_element(probes.begin(), probes.end()));
    const auto rs = remote_stationary_test(orbit, probes, 0.05, schedule);
    std::string finals;
    for (const auto& t : rs.tests) finals += (finals.empty() ? "" : ", ") + num(t.curve.sups.back());
    s.check("orbit from " + num(u0) + " remotely stationary at eps=0.05 (default probes, horizon 1e5)",
            rs.verdict == Verdict::Pass, "final-window sups " + finals);
  }

  const auto sep = separation_constancy_test(bh.field, 3.0, 12.0, 0.0, 1e5, {1e4, 1e5}, 1e-3);
  s.check("gap of orbits from 3 and 12 settles to a constant on [1e4,1e5]", sep.verdict == Verdict::Pass,
          "C = " + num(sep.C) + ", drift " + num(sep.drift));
  return s.done();
}

SuiteResult periodic() {
  Suite s("periodic");
  const auto field = ScalarField::ode("-x+sin(t)");
  const double period = 2.0 * std::numbers::pi;

  const auto from0 = integrate(field, 0.0, 0.0, 100.0, tight(1e-10));
  const auto b = boundedness(from0, 1.2);
  s.check("solution from 0 bounded by 1.2 on [0,100]", b.passed(), "sup " + num(b.extreme));

  const auto traj = integrate(field, 5.0, 0.0, 1200.0, tight(1e-10));
  const auto asym = asymptotic_tau_periodic_test(traj, period, 1e-4);
  s.check("phi(2 pi k) converges: asymptotically 2pi-periodic at eps=1e-4", asym.verdict == Verdict::Pass,
          "spread " + num(asym.spread));
  const auto rt = remote_tau_periodic_test(traj, period, 1e-6, WindowSchedule::geometric(100.0, 10.0, 1000.0));
  s.check("remotely 2pi-periodic at eps=1e-6", rt.verdict == Verdict::Pass,
          "final-window sup " + num(rt.curve.sups.back()));

  const auto sep = separation_constancy_test(field, 0.0, 1.0, 0.0, 30.0, {20.0, 30.0}, 1e-8, tight(1e-12));
  s.check("separation of solutions from 0 and 1 tends to C = 0", sep.verdict == Verdict::Pass && sep.C <= 1e-8,
          "C = " + num(sep.C) + ", drift " + num(sep.drift));
  return s.done();
}

SuiteResult monotone(std::uint64_t seed) {
  Suite s("monotone");
  const auto ts = linspace(0, 50, 51);
  const auto xs = linspace(-10, 10, 81);
  const auto damped = ScalarField::ode("-x+sin(t)");
  const auto ni = check_monotone_in_x(damped, ts, xs, Direction::NonIncreasing);
  const auto nd = check_monotone_in_x(damped, ts, xs, Direction::NonDecreasing);
  s.check("-x+sin(t) is non-increasing in x", ni.passed(), "largest increase " + num(ni.extreme));
  s.check("-x+sin(t) is not non-decreasing in x (witness reported)", nd.verdict == Verdict::Fail && nd.witness,
          "largest decrease " + num(nd.extreme));

  const auto cube = example_field(find_example("exAAP1"));
  const bool both = check_monotone_in_x(cube, ts, xs, Direction::NonDecreasing).passed() &&
                    check_monotone_in_x(cube, ts, xs, Direction::NonIncreasing).passed();
  s.check("x-independent field is monotone in both directions", both, "");

  UniformStream rng(seed);
  double worst = -1e300;
  for (int i = 0; i < 20; ++i) {
    double u[] = {rng.between(-10, 10), rng.between(-10, 10)};
    if (u[0] > u[1]) std::swap(u[0], u[1]);
    const auto tr = integrate_many(damped, u, 0.0, 20.0, tight(1e-10));
    for (std::size_t k = 0; k < tr[0].size(); ++k) worst = std::max(worst, tr[0].values()[k] - tr[1].values()[k]);
  }
  s.check("order preserved: u1 <= u2 gives phi(t,u1) <= phi(t,u2) + 1e-9", worst <= 1e-9,
          "largest phi(t,u1) - phi(t,u2) = " + num(worst));

  const auto growing = ScalarField::ode("x/10+sin(t)");
  const auto gap = contraction_gap(growing, 0.0, 1.0, 0.0, 10.0, tight(1e-10));
  s.check("a non-decreasing right-hand side separates solutions (contraction needs the other direction)",
          gap.report.verdict == Verdict::Fail, "gap(10) = " + num(gap.series.gaps.back()));
  return s.done();
}

}  // namespace

std::vector<SuiteResult> run_suite(std::string_view name, std::uint64_t seed) {
  std::vector<SuiteResult> out;
  const bool all = name == "all";
  bool found = all;
  for (const auto& info : suites()) {
    if (!all && name != info.name && name != info.alias) continue;
    found = true;
    if (info.name == "contraction") out.push_back(contraction(seed));
    if (info.name == "counterexample") out.push_back(counterexample());
    if (info.name == "beverton-holt") out.push_back(beverton_holt());
    if (info.name == "periodic") out.push_back(periodic());
    if (info.name == "monotone") out.push_back(monotone(seed));
  }
  if (!found) {
    std::string known = "all";
    for (const auto& info : suites()) known += ", " + info.name;
    throw std::out_of_range("unknown suite '" + std::string(name) + "' (known: " + known + ")");
  }
  return out;
}

}  // namespace remrec
