#include "remrec/classify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "sup_engine.hpp"

namespace remrec {

using detail::SupEngine;

namespace {

constexpr double kSnap = 1e-9;

// Runs fn(i) for i in [0, n) on up to `threads` workers; results are
// written by index so the outcome does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::int64_t first_index(double t0, double T, double delta) {
  return static_cast<std::int64_t>(std::ceil((T - t0) / delta - kSnap));
}

std::int64_t last_index(double t0, double T2, double delta) {
  return static_cast<std::int64_t>(std::floor((T2 - t0) / delta + kSnap));
}

void check_shift(const Trajectory& traj, double tau, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("delta must be positive");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be non-negative");
  if (traj.kind() == TimeKind::Discrete) {
    if (tau != std::nearbyint(tau)) throw std::invalid_argument("discrete trajectories need integer tau");
    if (delta != 1.0) throw std::invalid_argument("discrete trajectories need delta = 1");
  }
}

void check_window(const Trajectory& traj, double tau, Window w) {
  const double slack = kSnap * traj.step();
  if (!(w.end > w.start)) throw ScheduleError("degenerate window");
  if (w.start < traj.t0() - slack || w.end + tau > traj.t_end() + slack) {
    std::ostringstream os;
    os << "window [" << w.start << ", " << w.end << "] with tau=" << tau << " needs span ["
       << w.start << ", " << w.end + tau << "], trajectory covers [" << traj.t0() << ", "
       << traj.t_end() << "]";
    throw SpanError(os.str());
  }
}

struct GridWindow {
  std::int64_t lo, hi;
};

GridWindow grid_window(const Trajectory& traj, Window w, double delta) {
  GridWindow g{first_index(traj.t0(), w.start, delta), last_index(traj.t0(), w.end, delta)};
  if (g.hi < g.lo) throw ScheduleError("window contains no grid point");
  return g;
}

TailSupCurve curve_for(const SupEngine& engine, double tau, double eps, const WindowSchedule& s) {
  const Trajectory& traj = engine.trajectory();
  const double delta = s.step_for(traj);
  TailSupCurve c;
  c.tau = tau;
  c.epsilon = eps;
  c.windows = s.windows;
  c.noise_floor = 2.0 * traj.error_budget();
  for (const Window& w : s.windows) {
    const auto g = grid_window(traj, w, delta);
    const auto m = engine.grid_max(tau, g.lo, g.hi, delta);
    c.sups.push_back(m.value);
    c.where.push_back(m.t);
  }
  return c;
}

RemoteTest judge_curve(TailSupCurve curve) {
  RemoteTest r;
  const auto& s = curve.sups;
  const double eps = curve.epsilon;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] <= eps) {
      r.L = curve.windows[i].start;
      break;
    }
  }
  std::ostringstream note;
  if (s.back() > eps) {
    r.verdict = Verdict::Fail;
    note << "final window sup " << s.back() << " > eps";
  } else {
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
      if (s[i + 1] > 1.1 * s[i] + curve.noise_floor) {
        monotone = false;
        note << "sup rises from " << s[i] << " to " << s[i + 1] << " at window " << i + 1;
        break;
      }
    r.verdict = monotone ? Verdict::Pass : Verdict::Inconclusive;
    if (monotone) note << "final window sup " << s.back() << " <= eps, non-increasing within 10%";
  }
  r.note = note.str();
  r.curve = std::move(curve);
  return r;
}

double oscillation(const Trajectory& traj, double from) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.time(k) < from - kSnap * traj.step()) continue;
    lo = std::min(lo, traj.values()[k]);
    hi = std::max(hi, traj.values()[k]);
  }
  return hi - lo;
}

Verdict scale_verdict(double value, double eps) {
  if (value <= eps) return Verdict::Pass;
  if (value > 2.0 * eps) return Verdict::Fail;
  return Verdict::Inconclusive;
}

// Global sup of |phi(t+tau) - phi(t)| over the whole available span.
SupEngine::Max global_max(const SupEngine& engine, double tau, double delta) {
  const Trajectory& traj = engine.trajectory();
  return engine.grid_max(tau, 0, last_index(traj.t0(), traj.t_end() - tau, delta), delta);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

WindowSchedule WindowSchedule::geometric(double first, double ratio, double last_end, double delta) {
  if (!(first > 0.0) || !(ratio > 1.0)) throw ScheduleError("geometric schedule needs first > 0, ratio > 1");
  if (!(last_end > first)) {
    std::ostringstream os;
    os << "schedule starting at " << first << " needs a window end beyond it, got " << last_end;
    throw ScheduleError(os.str());
  }
  WindowSchedule s;
  s.delta = delta;
  for (double a = first; a < last_end; a *= ratio) s.windows.push_back({a, std::min(a * ratio, last_end)});
  return s;
}

void WindowSchedule::validate(const Trajectory& traj, double tau) const {
  if (windows.empty()) throw ScheduleError("schedule has no windows");
  const double d = step_for(traj);
  check_shift(traj, tau, d);
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (i > 0 && !(windows[i].start > windows[i - 1].start))
      throw ScheduleError("window starts must increase strictly");
    check_window(traj, tau, windows[i]);
    grid_window(traj, windows[i], d);
  }
}

WindowSchedule default_schedule(const Trajectory& traj, double tau_max, double first, double ratio) {
  return WindowSchedule::geometric(first, ratio, traj.t_end() - tau_max);
}

TailSup tail_sup_detail(const Trajectory& traj, double tau, Window w, double delta) {
  check_shift(traj, tau, delta);
  check_window(traj, tau, w);
  const auto g = grid_window(traj, w, delta);
  const SupEngine engine(traj);
  const auto m = engine.grid_max(tau, g.lo, g.hi, delta);
  return {m.value, m.t, 2.0 * traj.error_budget()};
}

double tail_sup(const Trajectory& traj, double tau, double T, double T2, double delta) {
  return tail_sup_detail(traj, tau, {T, T2}, delta).sup;
}

RemoteTest remote_tau_periodic_test(const Trajectory& traj, double tau, double eps,
                                    const WindowSchedule& schedule) {
  schedule.validate(traj, tau);
  const SupEngine engine(traj);
  return judge_curve(curve_for(engine, tau, eps, schedule));
}

std::vector<double> default_probes(TimeKind kind, std::uint64_t seed) {
  UniformStream rng(seed);
  std::vector<double> p{1.0, std::sqrt(2.0), 5.0, 17.3, 100.0 * rng.unit()};
  if (kind == TimeKind::Discrete)
    for (double& x : p) x = std::max(1.0, std::ceil(x));
  return p;
}

namespace {

RemoteStationaryTest stationary_with(const SupEngine& engine, const std::vector<double>& probes, double eps,
                                     const WindowSchedule& schedule, unsigned threads) {
  if (probes.empty()) throw std::invalid_argument("remote stationary test needs at least one probe");
  for (double tau : probes) schedule.validate(engine.trajectory(), tau);
  RemoteStationaryTest out;
  out.probes = probes;
  out.tests.resize(probes.size());
  parallel_for(probes.size(), threads, [&](std::size_t i) {
    out.tests[i] = judge_curve(curve_for(engine, probes[i], eps, schedule));
  });
  bool all_pass = true;
  bool any_fail = false;
  for (const auto& t : out.tests) {
    all_pass = all_pass && t.verdict == Verdict::Pass;
    any_fail = any_fail || t.verdict == Verdict::Fail;
  }
  out.verdict = all_pass ? Verdict::Pass : any_fail ? Verdict::Fail : Verdict::Inconclusive;
  return out;
}

}  // namespace

RemoteStationaryTest remote_stationary_test(const Trajectory& traj, const std::vector<double>& probes,
                                            double eps, const WindowSchedule& schedule,
                                            unsigned threads) {
  const SupEngine engine(traj);
  return stationary_with(engine, probes, eps, schedule, threads);
}

const char* to_string(ScanMode m) { return m == ScanMode::Global ? "global" : "remote"; }

std::size_t TauRange::count() const {
  if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("tau range needs step > 0 and hi >= lo");
  return static_cast<std::size_t>(std::floor((hi - lo) / step + kSnap)) + 1;
}

double TauRange::at(std::size_t i) const { return lo + static_cast<double>(i) * step; }

Density relative_density(const std::vector<double>& sorted, double lo, double hi, double l) {
  Density d;
  d.window = l;
  if (sorted.empty()) {
    d.l_min = std::numeric_limits<double>::infinity();
    d.largest_gap = hi - lo;
    d.verdict = Verdict::Fail;
    return d;
  }
  for (std::size_t i = 1; i < sorted.size(); ++i) d.largest_gap = std::max(d.largest_gap, sorted[i] - sorted[i - 1]);
  d.l_min = std::max({sorted.front() - lo, hi - sorted.back(), d.largest_gap});
  d.verdict = d.l_min <= l ? Verdict::Pass : Verdict::Fail;
  return d;
}

std::vector<double> AlmostPeriodSet::taus() const {
  std::vector<double> out;
  out.reserve(admitted.size());
  for (const auto& a : admitted) out.push_back(a.tau);
  return out;
}

namespace {

std::optional<AdmittedTau> admit(const SupEngine& engine, double tau, double eps, ScanMode mode,
                                 const WindowSchedule& schedule, double delta) {
  const Trajectory& traj = engine.trajectory();
  if (mode == ScanMode::Global) {
    const auto hi = last_index(traj.t0(), traj.t_end() - tau, delta);
    if (engine.exceeds(tau, 0, hi, delta, eps)) return std::nullopt;
    return AdmittedTau{tau, std::nullopt};
  }
  // suffix rule: L is the earliest window from which every later one holds
  std::optional<double> L;
  for (std::size_t w = schedule.windows.size(); w-- > 0;) {
    const auto g = grid_window(traj, schedule.windows[w], delta);
    if (engine.exceeds(tau, g.lo, g.hi, delta, eps)) break;
    L = schedule.windows[w].start;
  }
  if (!L) return std::nullopt;
  return AdmittedTau{tau, L};
}

void finish(AlmostPeriodSet& s, const ScanOptions& options) {
  std::sort(s.admitted.begin(), s.admitted.end(),
            [](const AdmittedTau& a, const AdmittedTau& b) { return a.tau < b.tau; });
  const double l = options.density_window > 0.0 ? options.density_window : (s.range.hi - s.range.lo) / 4.0;
  s.density = relative_density(s.taus(), s.range.lo, s.range.hi, l);
}

// `global`, when given, is a global scan of the same range: its admitted
// shifts are admitted remotely from the first window on without rescanning.
AlmostPeriodSet scan_with(const SupEngine& engine, double eps, ScanMode mode, const TauRange& range,
                          const WindowSchedule& schedule, const ScanOptions& options,
                          const AlmostPeriodSet* global = nullptr) {
  const Trajectory& traj = engine.trajectory();
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (range.lo < 0.0) throw std::invalid_argument("tau range must start at 0 or later");
  const std::size_t n = range.count();
  const double delta = schedule.step_for(traj);
  if (mode == ScanMode::Global) {
    check_shift(traj, range.hi, delta);
    if (!(range.hi < traj.t_end() - traj.t0()))
      throw SpanError("tau range exceeds the trajectory span");
  } else {
    schedule.validate(traj, range.hi);
  }

  std::vector<char> known(n, 0);
  if (global && mode == ScanMode::Remote)
    for (const auto& a : global->admitted) {
      const auto i = static_cast<std::size_t>(std::llround((a.tau - range.lo) / range.step));
      if (i < n && std::fabs(range.at(i) - a.tau) <= kSnap * range.step) known[i] = 1;
    }

  std::vector<std::optional<AdmittedTau>> found(n);
  parallel_for(n, options.threads, [&](std::size_t i) {
    if (known[i])
      found[i] = AdmittedTau{range.at(i), schedule.windows.front().start};
    else
      found[i] = admit(engine, range.at(i), eps, mode, schedule, delta);
  });

  AlmostPeriodSet out;
  out.epsilon = eps;
  out.mode = mode;
  out.range = range;
  for (auto& f : found)
    if (f) out.admitted.push_back(*f);
  finish(out, options);
  return out;
}

// Multiples of a candidate period are checked directly: near-periods can
// be narrower than the tau-grid step.
void add_multiples(AlmostPeriodSet& s, const SupEngine& engine, double period, const WindowSchedule& schedule,
                   double delta, const ScanOptions& options) {
  if (!(period > 0.0)) return;
  bool added = false;
  for (int k = 1; k * period <= s.range.hi + kSnap * s.range.step; ++k) {
    const double tau = std::min(k * period, s.range.hi);
    const bool present = std::any_of(s.admitted.begin(), s.admitted.end(), [&](const AdmittedTau& a) {
      return std::fabs(a.tau - tau) <= kSnap * s.range.step;
    });
    if (present) continue;
    if (auto a = admit(engine, tau, s.epsilon, s.mode, schedule, delta)) {
      s.admitted.push_back(*a);
      added = true;
    }
  }
  if (added) finish(s, options);
}

// Admitted taus grouped into runs of consecutive grid points.
std::vector<std::pair<std::size_t, std::size_t>> clusters(const AlmostPeriodSet& s) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const auto& a = s.admitted;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i > 0 && std::fabs(a[i].tau - a[i - 1].tau - s.range.step) <= 1e-6 * s.range.step)
      out.back().second = i;
    else
      out.emplace_back(i, i);
  }
  return out;
}

// Golden-section minimum of `score` on [c - h, c + h]; keeps c if no better.
template <class Score>
double refine(Score&& score, double c, double h) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = c - h;
  double hi = c + h;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = score(x1);
  double f2 = score(x2);
  for (int it = 0; it < 40; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = score(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = score(x2);
    }
  }
  const double best = f1 < f2 ? x1 : x2;
  return std::min(f1, f2) < score(c) ? best : c;
}

// Best shift inside the first admitted cluster away from zero.
template <class Score>
std::optional<double> cluster_period(const AlmostPeriodSet& s, bool discrete, Score&& score) {
  for (auto [b, e] : clusters(s)) {
    if (s.range.lo == 0.0 && s.admitted[b].tau <= 0.0) continue;
    double best = s.admitted[b].tau;
    double best_score = score(best);
    for (std::size_t i = b + 1; i <= e; ++i) {
      const double v = score(s.admitted[i].tau);
      if (v < best_score) {
        best_score = v;
        best = s.admitted[i].tau;
      }
    }
    return discrete ? best : refine(score, best, s.range.step);
  }
  return std::nullopt;
}

// Dip of the (subsampled) final-window sup past its first peak.
template <class Score>
std::optional<double> tail_minimum(const SupEngine& engine, const TauRange& range, const WindowSchedule& schedule,
                                   double delta, unsigned threads, Score&& score) {
  const Trajectory& traj = engine.trajectory();
  const auto g = grid_window(traj, schedule.windows.back(), delta);
  const std::int64_t stride = std::max<std::int64_t>(1, (g.hi - g.lo + 1) / 2000);
  const std::size_t n = range.count();
  std::vector<double> s(n, 0.0);
  parallel_for(n, threads, [&](std::size_t i) {
    double m = 0.0;
    for (std::int64_t j = g.lo; j <= g.hi; j += stride)
      m = std::max(m, engine.diff(traj.t0() + static_cast<double>(j) * delta, range.at(i)));
    s[i] = m;
  });
  std::size_t peak = n;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (s[i] >= s[i - 1] && s[i] > s[i + 1]) {
      peak = i;
      break;
    }
  if (peak == n) return std::nullopt;
  std::size_t deepest = peak;
  for (std::size_t i = peak + 1; i < n; ++i)
    if (s[i] < s[deepest]) deepest = i;
  if (!(s[deepest] < 0.5 * s[peak])) return std::nullopt;
  // first dip close to the deepest one, so 2pi wins over 6pi
  const double thr = s[deepest] + 0.1 * (s[peak] - s[deepest]);
  std::size_t best = deepest;
  for (std::size_t i = peak + 1; i < deepest; ++i)
    if (s[i] <= thr && s[i] <= s[i - 1] && s[i] <= s[i + 1]) {
      best = i;
      break;
    }
  if (traj.kind() == TimeKind::Discrete) return range.at(best);
  return refine(score, range.at(best), range.step);
}

}  // namespace

AlmostPeriodSet almost_period_scan(const Trajectory& traj, double eps, ScanMode mode,
                                   const TauRange& range, const WindowSchedule& schedule,
                                   const ScanOptions& options) {
  const SupEngine engine(traj);
  return scan_with(engine, eps, mode, range, schedule, options);
}

AsymptoticTest asymptotic_tau_periodic_test(const Trajectory& traj, double tau, double eps) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (traj.kind() == TimeKind::Discrete && tau != std::nearbyint(tau))
    throw std::invalid_argument("discrete trajectories need integer tau");
  const auto K = static_cast<std::size_t>(std::floor((traj.t_end() - traj.t0()) / tau + kSnap));
  if (K < 20) {
    std::ostringstream os;
    os << "asymptotic test needs 20 multiples of tau=" << tau << ", span [" << traj.t0() << ", "
       << traj.t_end() << "] has " << K;
    throw SpanError(os.str());
  }
  AsymptoticTest r;
  r.tau = tau;
  for (std::size_t k = 0; k <= K; ++k) {
    const double t = std::min(traj.t0() + static_cast<double>(k) * tau, traj.t_end());
    r.times.push_back(t);
    r.values.push_back(traj.at(t));
  }
  const auto first = r.values.begin() + static_cast<std::ptrdiff_t>(K - K / 4);
  const auto [mn, mx] = std::minmax_element(first, r.values.end());
  r.spread = *mx - *mn;
  r.verdict = scale_verdict(r.spread, eps);
  return r;
}

const std::vector<std::string>& class_names() {
  static const std::vector<std::string> names{
      "stationary",          "tau_periodic",           "almost_periodic",
      "asymptotically_stationary", "asymptotically_tau_periodic", "remotely_tau_periodic",
      "remotely_stationary", "remotely_almost_periodic"};
  return names;
}

Verdict ClassificationReport::verdict(std::string_view name) const {
  for (const auto& c : classes)
    if (c.name == name) return c.verdict;
  throw std::out_of_range("unknown class " + std::string(name));
}

bool ClassificationReport::all_inconclusive() const {
  return std::all_of(classes.begin(), classes.end(),
                     [](const ClassResult& c) { return c.verdict == Verdict::Inconclusive; });
}

std::vector<std::string> hierarchy_violations(const ClassificationReport& report) {
  static const std::pair<const char*, const char*> implications[] = {
      {"stationary", "tau_periodic"},
      {"stationary", "almost_periodic"},
      {"tau_periodic", "remotely_tau_periodic"},
      {"almost_periodic", "remotely_almost_periodic"},
      {"asymptotically_stationary", "remotely_stationary"},
      {"asymptotically_tau_periodic", "remotely_tau_periodic"},
      {"remotely_stationary", "remotely_tau_periodic"},
      {"remotely_tau_periodic", "remotely_almost_periodic"},
  };
  std::vector<std::string> out;
  for (auto [a, b] : implications)
    if (report.verdict(a) == Verdict::Pass && report.verdict(b) == Verdict::Fail)
      out.push_back(std::string(a) + " passes but " + b + " fails");
  return out;
}

ClassificationReport classify_trajectory(const Trajectory& traj, double eps, const ClassifyConfig& config) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const bool discrete = traj.kind() == TimeKind::Discrete;
  TauRange range = config.range;
  if (range.step <= 0.0) range.step = discrete ? 1.0 : 0.01;
  const double delta = discrete ? 1.0 : (config.delta > 0.0 ? config.delta : traj.step());

  ClassificationReport rep;
  rep.resolution = {eps, traj.t_end(), delta, range.hi, range.step};
  rep.probes = config.probes.empty() ? default_probes(traj.kind(), config.seed) : config.probes;
  for (const auto& n : class_names()) rep.classes.push_back({n, Verdict::Inconclusive, ""});
  auto set = [&](std::string_view name, Verdict v, std::string note) {
    for (auto& c : rep.classes)
      if (c.name == name) {
        c.verdict = v;
        c.note = std::move(note);
      }
  };
  auto guarded = [&](std::string_view name, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      set(name, Verdict::Inconclusive, std::string("not evaluated: ") + e.what());
    }
  };

  const SupEngine engine(traj);
  std::optional<WindowSchedule> schedule;
  std::string schedule_error;
  try {
    // every shift the schedule will see: scan range (plus a refinement
    // step), probes and a user tau
    double reach = range.hi + range.step;
    for (double p : rep.probes) reach = std::max(reach, p);
    if (config.tau) reach = std::max(reach, *config.tau);
    schedule = default_schedule(traj, reach, config.first_window, config.ratio);
    schedule->delta = delta;
    schedule->validate(traj, reach);
  } catch (const std::exception& e) {
    schedule.reset();
    schedule_error = e.what();
  }
  auto need_schedule = [&]() -> const WindowSchedule& {
    if (!schedule) throw ScheduleError(schedule_error);
    return *schedule;
  };
  WindowSchedule whole_span;
  whole_span.delta = delta;
  const ScanOptions options{config.density_window, config.threads};

  {
    const double osc = oscillation(traj, traj.t0());
    set("stationary", scale_verdict(osc, eps), "oscillation " + fmt(osc) + " over the whole span");
  }

  guarded("almost_periodic", [&] {
    rep.global_scan = scan_with(engine, eps, ScanMode::Global, range, whole_span, options);
  });
  guarded("remotely_almost_periodic", [&] {
    rep.remote_scan = scan_with(engine, eps, ScanMode::Remote, range, need_schedule(), options,
                                rep.global_scan ? &*rep.global_scan : nullptr);
  });

  auto global_score = [&](double tau) {
    if (tau <= 0.0 || tau >= traj.t_end() - traj.t0()) return std::numeric_limits<double>::infinity();
    return global_max(engine, tau, delta).value;
  };
  auto tail_score = [&](double tau) {
    if (tau <= 0.0 || tau > range.hi) return std::numeric_limits<double>::infinity();
    const auto g = grid_window(traj, need_schedule().windows.back(), delta);
    return engine.grid_max(tau, g.lo, g.hi, delta).value;
  };
  if (config.tau) {
    rep.tau = *config.tau;
    rep.tau_source = "user";
  } else {
    std::optional<double> c;
    if (rep.global_scan && (c = cluster_period(*rep.global_scan, discrete, global_score))) {
      rep.tau_source = "global scan";
    } else if (rep.remote_scan && (c = cluster_period(*rep.remote_scan, discrete, tail_score))) {
      rep.tau_source = "remote scan";
    } else if (schedule) {
      try {
        if ((c = tail_minimum(engine, range, *schedule, delta, config.threads, tail_score)))
          rep.tau_source = "tail minimum";
      } catch (const std::exception&) {
        c.reset();
      }
    }
    rep.tau = c.value_or(1.0);
    if (!c) rep.tau_source = "default";
  }
  const double tau = rep.tau;

  guarded("almost_periodic", [&] {
    if (!rep.global_scan) return;
    add_multiples(*rep.global_scan, engine, tau, whole_span, delta, options);
    const auto& d = rep.global_scan->density;
    set("almost_periodic", d.verdict,
        std::to_string(rep.global_scan->admitted.size()) + " admitted, l_min " + fmt(d.l_min) +
            " vs l " + fmt(d.window));
  });

  guarded("remotely_almost_periodic", [&] {
    if (!rep.remote_scan) return;
    auto& s = *rep.remote_scan;
    add_multiples(s, engine, tau, need_schedule(), delta, options);
    std::string note = std::to_string(s.admitted.size()) + " admitted, l_min " + fmt(s.density.l_min) +
                       " vs l " + fmt(s.density.window);
    if (s.density.verdict == Verdict::Pass) {
      set("remotely_almost_periodic", Verdict::Pass, note);
      return;
    }
    // Not dense yet: is the tail still contracting for rejected shifts?
    std::vector<double> rejected;
    std::size_t a = 0;
    for (std::size_t i = 0; i < range.count(); ++i) {
      const double t = range.at(i);
      while (a < s.admitted.size() && s.admitted[a].tau < t - 1e-12) ++a;
      if (a < s.admitted.size() && std::fabs(s.admitted[a].tau - t) <= 1e-12) continue;
      rejected.push_back(t);
    }
    const std::size_t samples = std::min<std::size_t>(32, rejected.size());
    bool decaying = false;
    for (std::size_t k = 0; k < samples && !decaying; ++k) {
      const auto c = curve_for(engine, rejected[(k * rejected.size()) / samples], eps, need_schedule());
      decaying = c.sups.back() < 0.9 * c.sups.front();
    }
    set("remotely_almost_periodic", decaying ? Verdict::Inconclusive : Verdict::Fail,
        note + (decaying ? ", rejected shifts still decaying" : ", no decay among rejected shifts"));
  });

  guarded("tau_periodic", [&] {
    check_shift(traj, tau, delta);
    const auto m = global_max(engine, tau, delta);
    set("tau_periodic", m.value <= eps ? Verdict::Pass : Verdict::Fail,
        "sup " + fmt(m.value) + " over the whole span at tau " + fmt(tau));
  });

  guarded("remotely_tau_periodic", [&] {
    need_schedule().validate(traj, tau);
    rep.tau_test = judge_curve(curve_for(engine, tau, eps, need_schedule()));
    set("remotely_tau_periodic", rep.tau_test->verdict, rep.tau_test->note);
  });

  guarded("asymptotically_stationary", [&] {
    const double from = need_schedule().windows.back().start;
    const double osc = oscillation(traj, from);
    set("asymptotically_stationary", scale_verdict(osc, eps),
        "oscillation " + fmt(osc) + " on t >= " + fmt(from));
  });

  guarded("asymptotically_tau_periodic", [&] {
    rep.asymptotic = asymptotic_tau_periodic_test(traj, tau, eps);
    set("asymptotically_tau_periodic", rep.asymptotic->verdict,
        "spread " + fmt(rep.asymptotic->spread) + " of phi(t0 + k tau) over the last quarter");
  });

  guarded("remotely_stationary", [&] {
    rep.stationary_probes = stationary_with(engine, rep.probes, eps, need_schedule(), config.threads);
    const auto& t = *rep.stationary_probes;
    std::string note = std::to_string(rep.probes.size()) + " probes pass";
    for (std::size_t i = 0; i < t.tests.size(); ++i)
      if (t.tests[i].verdict != Verdict::Pass) {
        note = "probe tau " + fmt(rep.probes[i]) + ": " + t.tests[i].note;
        if (t.tests[i].verdict == Verdict::Fail) break;
      }
    set("remotely_stationary", t.verdict, note);
  });

  rep.violations = hierarchy_violations(rep);
  rep.hierarchy_consistent = rep.violations.empty();
  rep.inconclusive = !rep.hierarchy_consistent;
  return rep;
}

SeparationReport separation_constancy_test(const ScalarField& field, double u1, double u2, double t0,
                                           double t1, Window tail, double tol,
                                           const IntegratorConfig& config) {
  if (u1 == u2) throw std::invalid_argument("separation test needs u1 != u2");
  std::vector<Trajectory> trajs;
  if (field.kind() == TimeKind::Discrete) {
    if (t0 != 0.0) throw std::invalid_argument("discrete separation test starts at n = 0");
    const auto steps = static_cast<long>(std::llround(t1));
    trajs.push_back(iterate(field, u1, steps));
    trajs.push_back(iterate(field, u2, steps));
  } else {
    const double u[] = {u1, u2};
    trajs = integrate_many(field, u, t0, t1, config);
  }
  const Trajectory& a = trajs[0];
  const Trajectory& b = trajs[1];
  const double slack = kSnap * a.step();
  std::vector<double> g;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a.time(k);
    if (t >= tail.start - slack && t <= tail.end + slack) g.push_back(std::fabs(a.values()[k] - b.values()[k]));
  }
  if (g.empty()) throw SpanError("tail window holds no samples");
  SeparationReport r;
  r.u1 = u1;
  r.u2 = u2;
  r.tail = tail;
  r.tolerance = tol;
  double sum = 0.0;
  for (double v : g) sum += v;
  r.C = sum / static_cast<double>(g.size());
  for (double v : g) r.drift = std::max(r.drift, std::fabs(v - r.C));
  r.verdict = r.drift <= tol ? Verdict::Pass : Verdict::Fail;
  return r;
}

EquiProbe equi_almost_periodicity_probe(const std::vector<Trajectory>& trajs, double eps,
                                        const TauRange& range, unsigned threads) {
  if (trajs.size() < 2) throw std::invalid_argument("equi probe needs at least two trajectories");
  for (const auto& t : trajs)
    if (t.kind() != trajs.front().kind() || t.step() != trajs.front().step())
      throw std::invalid_argument("equi probe needs trajectories on a common grid");
  EquiProbe out;
  out.epsilon = eps;
  out.range = range;
  std::vector<char> common(range.count(), 1);
  WindowSchedule unused;
  for (const auto& t : trajs) {
    const auto s = almost_period_scan(t, eps, ScanMode::Global, range, unused, {0.0, threads});
    out.admitted_counts.push_back(s.admitted.size());
    std::vector<char> mine(common.size(), 0);
    for (const auto& a : s.admitted)
      mine[static_cast<std::size_t>(std::llround((a.tau - range.lo) / range.step))] = 1;
    for (std::size_t i = 0; i < common.size(); ++i) common[i] = common[i] && mine[i];
  }
  for (std::size_t i = 0; i < common.size(); ++i)
    if (common[i]) out.common.push_back(range.at(i));
  out.density = relative_density(out.common, range.lo, range.hi, (range.hi - range.lo) / 4.0);
  out.note = "heuristic probe over " + std::to_string(trajs.size()) +
             " trajectories on a finite span; not a certificate";
  return out;
}

}  // namespace remrec
