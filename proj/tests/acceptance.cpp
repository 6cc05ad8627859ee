// Acceptance run: one line per criterion, nonzero exit if any fails.
// Oracles are closed forms or plain loops that do not go through the
// library code they check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "parser_cases.hpp"
#include "remrec/catalog.hpp"
#include "remrec/classify.hpp"
#include "remrec/expr.hpp"
#include "remrec/integrate.hpp"
#include "remrec/properties.hpp"
#include "remrec/random.hpp"

using namespace remrec;

namespace {

constexpr double kPi = std::numbers::pi;
const double kPi3 = kPi * kPi * kPi;

unsigned threads() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// --- independent oracles ---------------------------------------------------

double aap_oracle(double t, double x0) { return x0 + std::sin(std::cbrt(t * t + kPi3)); }

double bh_K(long n) { return 10.0 + std::sin(std::log(1.0 + static_cast<double>(n))); }

std::vector<double> bh_orbit(double u0, long steps) {
  std::vector<double> v{u0};
  v.reserve(static_cast<std::size_t>(steps) + 1);
  for (long n = 0; n < steps; ++n) {
    const double K = bh_K(n);
    const double x = v.back();
    v.push_back(2.0 * K * x / (K + x));
  }
  return v;
}

IntegratorConfig tight(double tol, double dt) {
  IntegratorConfig c;
  c.abs_tol = tol;
  c.rel_tol = tol;
  c.output_step = dt;
  return c;
}

// --- criteria ---------------------------------------------------------------

Outcome c1() {
  const auto& ex = find_example("exAAP1");
  const auto tr = integrate(example_field(ex), 0.0, 0.0, 200.0, tight(1e-9, 0.01));
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) worst = std::max(worst, std::fabs(tr.values()[k] - aap_oracle(tr.time(k), 0.0)));
  return {worst <= 1e-6, "max |rkf45 - closed form| on [0,200] = " + num(worst) + " (<= 1e-6)"};
}

Outcome c2() {
  const auto tr = sample_function("sin(ln(1+abs(t)))", {}, 0.0, 1e4 + 6.0, 0.01);
  bool ok = true;
  std::string d;
  for (double tau : {1.0, std::sqrt(2.0), 5.0}) {
    const double sup = tail_sup(tr, tau, 1e3, 1e4, 0.01);
    const double bound = std::log((1e3 + 1.0 + tau) / (1e3 + 1.0));
    // brute force over the same grid, straight from the formula
    double brute = 0.0;
    for (long j = 100000; j <= 1000000; ++j) {
      const double t = 0.01 * static_cast<double>(j);
      brute = std::max(brute, std::fabs(std::sin(std::log(1 + t + tau)) - std::sin(std::log(1 + t))));
    }
    bool here = sup <= bound + 1e-6 && std::fabs(sup - brute) <= 1e-6;
    if (tau == 1.0) here = here && sup <= 1.1e-3;
    ok = ok && here;
    d += "tau=" + num(tau) + " sup=" + num(sup) + " bound=" + num(bound) + " brute=" + num(brute) + "; ";
  }
  return {ok, d};
}

const Trajectory& long_aap() {
  static const Trajectory tr = integrate(example_field(find_example("exAAP1")), 0.0, 0.0, 1e5 + 3.0, tight(1e-10, 0.1));
  return tr;
}

Outcome c3() {
  const auto& tr = long_aap();
  const double whole = tail_sup(tr, 3.0, 1e3, 1e5, 0.1);
  const auto s = WindowSchedule::geometric(1e3, 10.0, 1e5, 0.1);
  const auto r = remote_tau_periodic_test(tr, 3.0, 0.12, s);
  bool monotone = true;
  for (std::size_t i = 1; i < r.curve.sups.size(); ++i) monotone = monotone && r.curve.sups[i] <= r.curve.sups[i - 1];
  // closed-form check of the measured sup
  double brute = 0.0;
  for (long j = 10000; j <= 1000000; ++j) {
    const double t = 0.1 * static_cast<double>(j);
    brute = std::max(brute, std::fabs(aap_oracle(t + 3.0, 0.0) - aap_oracle(t, 0.0)));
  }
  std::string d = "sup over [1e3,1e5] = " + num(whole) + " (closed form " + num(brute) + ", need <= 0.12); windows:";
  for (std::size_t i = 0; i < r.curve.sups.size(); ++i) d += " " + num(r.curve.sups[i]);
  d += monotone ? " non-increasing" : " NOT non-increasing";
  return {whole <= 0.12 && monotone, d};
}

Outcome c4() {
  bool ok = true;
  double worst = 0.0;
  for (int k = 1; k <= 5; ++k) {
    const double kp = k * kPi;
    const double t1 = std::sqrt(kp * kp * kp - kPi3);
    const double a = kPi / 2 + 2 * k * kPi;
    const double t2 = std::sqrt(a * a * a - kPi3);
    const auto [w1, w2] = nonasymptotic_witnesses(k);
    const double e1 = std::fabs(aap_oracle(w1, 0.0) - 0.0);
    const double e2 = std::fabs(aap_oracle(w2, 0.0) - 1.0);
    ok = ok && e1 <= 1e-10 && e2 <= 1e-10 && std::fabs(w1 - t1) <= 1e-9 * t1 && std::fabs(w2 - t2) <= 1e-9 * t2;
    worst = std::max({worst, e1, e2});
  }
  const auto a = asymptotic_tau_periodic_test(long_aap(), 1.0, 0.3);
  return {ok && a.verdict == Verdict::Fail, "witness error max " + num(worst) + "; asymptotic tau=1 at eps=0.3: " +
                                                to_string(a.verdict) + " (spread " + num(a.spread) + ")"};
}

Outcome c5() {
  UniformStream rng(kDefaultSeed);
  bool ok = true;
  double worst_ratio = 0.0;
  double worst_rise = 0.0;
  for (const char* r : {"sin(t)", "sin(t)+sin(sqrt(2)*t)", "sin(ln(1+t))"}) {
    const auto f = ScalarField::ode(std::string("-x+") + r);
    for (int i = 0; i < 100; ++i) {
      const double u1 = rng.between(-10, 10);
      const double u2 = rng.between(-10, 10);
      const std::vector<double> u0{u1, u2};
      const auto p = integrate_many(f, u0, 0.0, 20.0, tight(1e-10, 0.1));
      double prev = std::fabs(u1 - u2);
      for (std::size_t k = 1; k < p[0].size(); ++k) {
        const double g = std::fabs(p[0].values()[k] - p[1].values()[k]);
        worst_rise = std::max(worst_rise, g - prev);
        if (g > prev + 1e-9) ok = false;
        prev = g;
      }
      // linear equation: the exact gap is |u1-u2| e^{-t}
      const double exact = std::fabs(u1 - u2) * std::exp(-20.0);
      const double ratio = prev / exact;
      worst_ratio = std::max(worst_ratio, ratio);
      if (ratio > 1.0 + 1e-3) ok = false;
    }
  }
  return {ok, "300 pairs; largest step-to-step rise " + num(worst_rise) + " (<= 1e-9), max gap(20)/(|du| e^-20) " +
                  num(worst_ratio) + " (<= 1.001)"};
}

Outcome c6() {
  const auto bh = make_beverton_holt(parse_beverton_holt("mu=2,K=10+sin(ln(1+n))"));
  UniformStream rng(kDefaultSeed);
  int bad = 0;
  double worst = 0.0;
  double first_u1 = 0.0;
  double first_u2 = 0.0;
  bool lib_agrees = true;
  for (int i = 0; i < 100; ++i) {
    const double u1 = rng.between(1, 25);
    const double u2 = rng.between(1, 25);
    const auto a = bh_orbit(u1, 10000);
    const auto b = bh_orbit(u2, 10000);
    if (i < 3) {
      const auto la = iterate(bh.field, u1, 10000);
      lib_agrees = lib_agrees && la.values() == a;
    }
    double prev = std::fabs(u1 - u2);
    const double d0 = prev;
    bool violated = false;
    for (std::size_t n = 1; n < a.size(); ++n) {
      const double g = std::fabs(a[n] - b[n]);
      if (g > prev || g > d0) {
        violated = true;
        worst = std::max(worst, g / d0);
      }
      prev = g;
    }
    if (violated && bad++ == 0) {
      first_u1 = u1;
      first_u2 = u2;
    }
  }
  return {bad == 0 && lib_agrees,
          std::to_string(bad) + "/100 pairs grow somewhere (first: " + num(first_u1) + ", " + num(first_u2) +
              "; largest gap/|dv| " + num(worst) + "); map slope at 0 is mu = 2 > 1" +
              (lib_agrees ? "" : "; library orbit differs from direct loop")};
}

Outcome c7() {
  const auto bh = make_beverton_holt(parse_beverton_holt("mu=2,K=10+sin(ln(1+n))"));
  const auto r = separation_constancy_test(bh.field, 3.0, 12.0, 0.0, 1e5, {1e4, 1e5}, 1e-3);
  const auto a = bh_orbit(3.0, 100000);
  const auto b = bh_orbit(12.0, 100000);
  double mean = 0.0;
  for (long n = 10000; n <= 100000; ++n) mean += std::fabs(a[static_cast<std::size_t>(n)] - b[static_cast<std::size_t>(n)]);
  mean /= 90001.0;
  double drift = 0.0;
  for (long n = 10000; n <= 100000; ++n)
    drift = std::max(drift, std::fabs(std::fabs(a[static_cast<std::size_t>(n)] - b[static_cast<std::size_t>(n)]) - mean));
  const auto m = separation_constancy_test(ScalarField::ode("-x+sin(t)"), 1.0, 5.0, 0.0, 200.0, {100.0, 200.0}, 1e-8,
                                           tight(1e-10, 0.05));
  const bool ok = r.verdict == Verdict::Pass && drift <= 1e-3 && std::fabs(r.drift - drift) <= 1e-12 &&
                  m.verdict == Verdict::Pass && m.C <= 1e-8;
  return {ok, "BH (3,12) drift " + num(r.drift) + " (direct loop " + num(drift) + ", <= 1e-3) around C=" + num(r.C) +
                  "; -x+sin t C=" + num(m.C) + " (<= 1e-8)"};
}

Outcome c8() {
  const auto bh = make_beverton_holt(parse_beverton_holt("mu=2,K=10+sin(ln(1+n)),alpha=9,beta=11"));
  const double bound = 2.0 * 11.0 / (2.0 - 1.0);
  bool ok = bh.limsup_bound && std::fabs(*bh.limsup_bound - bound) < 1e-12;
  std::string d = "bound mu*beta/(mu-1) = " + num(bound) + ";";
  for (double u0 : {1.0, 5.0, 20.0}) {
    const auto orbit = bh_orbit(u0, 100000);
    const double sup = *std::max_element(orbit.begin(), orbit.end());
    const auto tr = iterate(bh.field, u0, 100000);
    const auto probes = default_probes(TimeKind::Discrete, kDefaultSeed);
    const auto rs = remote_stationary_test(tr, probes, 0.05, default_schedule(tr, 100.0), threads());
    ok = ok && sup <= bound && rs.verdict == Verdict::Pass && tr.values() == orbit;
    d += " u0=" + num(u0) + ": sup " + num(sup) + ", remote stationary " + to_string(rs.verdict) + ";";
  }
  return {ok, d};
}

Outcome c9() {
  // sin(t): almost periodic with gap <= 6.4
  const auto& sine = find_example("sine");
  const auto s = simulate_example(sine, 0.0, sine.resolution.horizon);
  ClassifyConfig cfg;
  cfg.threads = threads();
  const auto rep = classify_trajectory(s, 0.05, cfg);
  const double gap = rep.global_scan ? rep.global_scan->density.largest_gap : 1e300;
  const bool ap = rep.verdict("almost_periodic") == Verdict::Pass && gap <= 6.4;
  const auto rs = remote_stationary_test(s, default_probes(TimeKind::Continuous, kDefaultSeed), 0.05,
                                         default_schedule(s, 100.0), threads());

  // sin(t)+sin(sqrt2 t): library scan against a direct scan of the formula
  const double T = 1000.0;
  const double h = 0.01;
  const auto q = sample_function("sin(t)+sin(sqrt(2)*t)", {}, 0.0, T, h);
  const TauRange range{0.0, 100.0, 0.01};
  const auto set = almost_period_scan(q, 0.1, ScanMode::Global, range, {}, {0.0, threads()});
  const auto phi = [](double t) { return std::sin(t) + std::sin(std::sqrt(2.0) * t); };
  const long last = std::lround((T - 100.0) / h);
  std::vector<double> brute;
  std::vector<double> near;
  for (long i = 0; i <= 10000; ++i) {
    const double tau = 0.01 * static_cast<double>(i);
    double sup = 0.0;
    for (long j = 0; j <= last && sup <= 0.1 + 1e-9; ++j) {
      const double t = h * static_cast<double>(j);
      sup = std::max(sup, std::fabs(phi(t + tau) - phi(t)));
    }
    if (sup <= 0.1) brute.push_back(tau);
    if (std::fabs(sup - 0.1) <= 1e-9) near.push_back(tau);
  }
  std::vector<double> lib;
  for (double t : set.taus())
    if (std::fabs(t * 100.0 - std::round(t * 100.0)) < 1e-6) lib.push_back(std::round(t * 100.0) / 100.0);
  std::vector<double> diff;
  std::set_symmetric_difference(lib.begin(), lib.end(), brute.begin(), brute.end(), std::back_inserter(diff));
  diff.erase(std::remove_if(diff.begin(), diff.end(),
                            [&](double t) { return std::find(near.begin(), near.end(), t) != near.end(); }),
             diff.end());
  const auto bd = relative_density(brute, range.lo, range.hi, (range.hi - range.lo) / 4.0);
  const bool agree = diff.empty();
  const bool dense = set.density.verdict == Verdict::Pass && bd.verdict == Verdict::Pass;

  const bool ok = ap && rs.verdict == Verdict::Fail && agree && dense;
  return {ok, "sin: AP " + std::string(to_string(rep.verdict("almost_periodic"))) + " gap " + num(gap) +
                  " (<= 6.4), remote stationary " + to_string(rs.verdict) + "; sin+sin(sqrt2 t) eps=0.1: " +
                  std::to_string(lib.size()) + " admitted (brute " + std::to_string(brute.size()) + ", " +
                  (agree ? "identical" : std::to_string(diff.size()) + " differ") + "), largest gap " +
                  num(set.density.largest_gap) + ", l_min " + num(set.density.l_min) + " vs l " +
                  num(set.density.window) + ": " + to_string(set.density.verdict)};
}

Outcome c10() {
  const auto f = ScalarField::ode("-x+sin(t)");
  const auto tr = integrate(f, 5.0, 0.0, 1200.0, tight(1e-12, 0.01));
  const double tau = 2 * kPi;
  const auto a = asymptotic_tau_periodic_test(tr, tau, 1e-4);
  const auto r = remote_tau_periodic_test(tr, tau, 1e-6, WindowSchedule::geometric(100.0, 10.0, 1000.0));
  // exact: phi(t+tau)-phi(t) = 5.5 e^{-t} (e^{-tau} - 1)
  const double exact_last = 5.5 * std::exp(-100.0) * (1 - std::exp(-tau));
  const bool ok = a.verdict == Verdict::Pass && r.verdict == Verdict::Pass;
  return {ok, "asymptotic eps=1e-4: " + std::string(to_string(a.verdict)) + " (spread " + num(a.spread) +
                  "); remote eps=1e-6: " + to_string(r.verdict) + " (final window sup " +
                  num(r.curve.sups.empty() ? -1 : r.curve.sups.back()) + ", exact bound on t>=100 " +
                  num(exact_last) + ")"};
}

Outcome c11() {
  bool ok = true;
  std::string d;
  for (const auto& ex : catalog()) {
    IntegratorConfig ic;
    ic.output_step = std::max(0.01, ex.resolution.horizon / 1e6);
    const auto tr = simulate_example(ex, ex.resolution.u0, ex.resolution.horizon, ic);
    ClassifyConfig cfg;
    cfg.threads = threads();
    cfg.probes = ex.resolution.probes;
    const auto rep = classify_trajectory(tr, ex.resolution.epsilon, cfg);
    const bool here = rep.hierarchy_consistent && rep.violations.empty() && hierarchy_violations(rep).empty();
    ok = ok && here;
    d += ex.name + (here ? " ok; " : " VIOLATION; ");
  }
  return {ok, d};
}

Outcome c12() {
  int golden_fail = 0;
  for (const auto& g : cases::golden()) {
    try {
      const auto e = expr::parse(g.text);
      const auto back = expr::parse(expr::print(e));
      bool good = expr::structurally_equal(e, back);
      for (const auto& p : cases::kPoints) {
        const double want = g.value(p.t, p.x, cases::kA);
        const double got = expr::eval(e, {p.t, p.x, {{"a", cases::kA}}});
        const double again = expr::eval(back, {p.t, p.x, {{"a", cases::kA}}});
        good = good && std::fabs(got - want) <= 1e-12 * (1 + std::fabs(want)) && got == again;
      }
      if (!good) ++golden_fail;
    } catch (...) {
      ++golden_fail;
    }
  }
  UniformStream rng(kDefaultSeed);
  int crashes = 0;
  int parsed = 0;
  for (int i = 0; i < 100000; ++i) {
    std::string s(static_cast<std::size_t>(rng.unit() * 32), '\0');
    for (auto& c : s) c = static_cast<char>(static_cast<int>(rng.unit() * 256));
    try {
      const auto e = expr::parse(s);
      (void)expr::print(e);
      ++parsed;
    } catch (const expr::ExprError&) {
    } catch (...) {
      ++crashes;
    }
  }
  return {golden_fail == 0 && crashes == 0 && cases::golden().size() == 100,
          std::to_string(cases::golden().size() - static_cast<std::size_t>(golden_fail)) + "/" +
              std::to_string(cases::golden().size()) + " golden cases; fuzz 100000 strings, " +
              std::to_string(crashes) + " escaped a non-parse error, " + std::to_string(parsed) + " parsed"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"C1  cube-root ODE vs closed form", c1},
      {"C2  exI1 tail sups under the log bound", c2},
      {"C3  exAAP1 tau=3 tail sup <= 0.12", c3},
      {"C4  exAAP1 witnesses and asymptotic fail", c4},
      {"C5  ODE contraction, 300 pairs", c5},
      {"C6  Beverton-Holt contraction, 100 pairs", c6},
      {"C7  separation constancy", c7},
      {"C8  Beverton-Holt bound and remote stationarity", c8},
      {"C9  classifier sanity", c9},
      {"C10 -x+sin t asymptotic/remote 2pi-periodic", c10},
      {"C11 hierarchy consistency over the catalog", c11},
      {"C12 parser golden suite and fuzz", c12},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.ok) ++failed;
    std::printf("[%s] %s | %s (%.1fs)\n", o.ok ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
