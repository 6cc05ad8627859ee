#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "remrec/field.hpp"
#include "remrec/integrate.hpp"
#include "remrec/random.hpp"
#include "remrec/trajectory.hpp"
#include "remrec/verdict.hpp"

namespace remrec {

class ScheduleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Window {
  double start = 0.0;
  double end = 0.0;
};

/// Windows [T_i, T_i'] with strictly increasing starts, scanned on the grid
/// t0 + j*delta of the trajectory. delta = 0 means "use the sample step".
struct WindowSchedule {
  std::vector<Window> windows;
  double delta = 0.0;

  /// [first, first*ratio], [first*ratio, first*ratio^2], ... with the last
  /// window clipped to `last_end`.
  static WindowSchedule geometric(double first, double ratio, double last_end, double delta = 0.0);

  /// Throws ScheduleError unless every window and its tau-shift fit the span.
  void validate(const Trajectory& traj, double tau) const;
  double step_for(const Trajectory& traj) const { return delta > 0.0 ? delta : traj.step(); }
};

/// Geometric schedule from 10^2, ratio 10, ending at t_end - tau_max.
WindowSchedule default_schedule(const Trajectory& traj, double tau_max, double first = 100.0,
                                double ratio = 10.0);

struct TailSup {
  double sup = 0.0;
  double at = 0.0;      ///< grid time attaining the sup
  double budget = 0.0;  ///< interpolation + integration error bound per value
};

/// max over the delta-grid in [T, T'] of |phi(t+tau) - phi(t)|.
double tail_sup(const Trajectory& traj, double tau, double T, double T2, double delta);
TailSup tail_sup_detail(const Trajectory& traj, double tau, Window w, double delta);

struct TailSupCurve {
  double tau = 0.0;
  double epsilon = 0.0;
  std::vector<Window> windows;
  std::vector<double> sups;
  std::vector<double> where;
  double noise_floor = 0.0;
};

struct RemoteTest {
  TailSupCurve curve;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<double> L;  ///< start of the first window with sup <= eps
  std::string note;
};

RemoteTest remote_tau_periodic_test(const Trajectory& traj, double tau, double eps,
                                    const WindowSchedule& schedule);

/// {1, sqrt 2, 5, 17.3, 100*u} with u drawn from the seed; for discrete
/// time each probe is rounded up to an integer.
std::vector<double> default_probes(TimeKind kind, std::uint64_t seed);

struct RemoteStationaryTest {
  std::vector<double> probes;
  std::vector<RemoteTest> tests;
  Verdict verdict = Verdict::Inconclusive;
};

RemoteStationaryTest remote_stationary_test(const Trajectory& traj, const std::vector<double>& probes,
                                            double eps, const WindowSchedule& schedule,
                                            unsigned threads = 1);

enum class ScanMode { Global, Remote };
const char* to_string(ScanMode m);

struct TauRange {
  double lo = 0.0;
  double hi = 100.0;
  double step = 0.01;

  std::size_t count() const;
  double at(std::size_t i) const;
};

struct AdmittedTau {
  double tau = 0.0;
  std::optional<double> L;
};

struct Density {
  double window = 0.0;        ///< l being tested
  double largest_gap = 0.0;   ///< largest gap between consecutive admitted taus
  double l_min = 0.0;         ///< smallest l meeting every length-l subinterval of the range
  Verdict verdict = Verdict::Fail;
};

/// Smallest l such that every length-l subinterval of [lo, hi] contains a
/// point of `sorted`, and the verdict for window `l`.
Density relative_density(const std::vector<double>& sorted, double lo, double hi, double l);

struct AlmostPeriodSet {
  double epsilon = 0.0;
  ScanMode mode = ScanMode::Global;
  TauRange range;
  std::vector<AdmittedTau> admitted;
  Density density;

  std::vector<double> taus() const;
};

struct ScanOptions {
  double density_window = 0.0;  ///< 0: a quarter of the tau-range
  unsigned threads = 1;
};

/// Global mode admits tau when |phi(t+tau)-phi(t)| <= eps on the whole
/// available span. Remote mode admits tau when every window from some
/// T_i onward has sup <= eps (L = that T_i). The schedule is ignored in
/// global mode.
AlmostPeriodSet almost_period_scan(const Trajectory& traj, double eps, ScanMode mode,
                                   const TauRange& range, const WindowSchedule& schedule,
                                   const ScanOptions& options = {});

struct AsymptoticTest {
  double tau = 0.0;
  std::vector<double> times;
  std::vector<double> values;
  double spread = 0.0;  ///< max - min over the last quarter of phi(t0 + k tau)
  Verdict verdict = Verdict::Inconclusive;
};

/// phi(t0 + k tau) must cover at least 20 multiples of tau.
AsymptoticTest asymptotic_tau_periodic_test(const Trajectory& traj, double tau, double eps);

struct ClassifyConfig {
  TauRange range{0.0, 100.0, 0.0};  ///< step 0: 0.01 continuous, 1 discrete
  std::optional<double> tau;
  std::vector<double> probes;  ///< empty: default_probes(seed)
  std::uint64_t seed = kDefaultSeed;
  double first_window = 100.0;
  double ratio = 10.0;
  double delta = 0.0;
  double density_window = 0.0;
  unsigned threads = 1;
};

struct ClassResult {
  std::string name;
  Verdict verdict = Verdict::Inconclusive;
  std::string note;
};

struct Resolution {
  double epsilon = 0.0;
  double horizon = 0.0;
  double delta = 0.0;
  double tau_max = 0.0;
  double tau_step = 0.0;
};

struct ClassificationReport {
  Resolution resolution;
  double tau = 1.0;
  std::string tau_source;
  std::vector<double> probes;
  std::vector<ClassResult> classes;
  std::optional<AlmostPeriodSet> global_scan;
  std::optional<AlmostPeriodSet> remote_scan;
  std::optional<RemoteTest> tau_test;
  std::optional<RemoteStationaryTest> stationary_probes;
  std::optional<AsymptoticTest> asymptotic;
  bool hierarchy_consistent = true;
  std::vector<std::string> violations;
  bool inconclusive = false;

  Verdict verdict(std::string_view name) const;
  bool all_inconclusive() const;
};

/// Class names in report order.
const std::vector<std::string>& class_names();

ClassificationReport classify_trajectory(const Trajectory& traj, double eps,
                                         const ClassifyConfig& config = {});

/// Recomputes the hierarchy flag; returns the violated implications.
std::vector<std::string> hierarchy_violations(const ClassificationReport& report);

struct SeparationReport {
  double u1 = 0.0;
  double u2 = 0.0;
  Window tail;
  double C = 0.0;
  double drift = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

/// g(t) = |phi(t,u1) - phi(t,u2)| on the tail window; C = mean of g there.
/// For maps, the span runs over n = 0..t1.
SeparationReport separation_constancy_test(const ScalarField& field, double u1, double u2, double t0,
                                           double t1, Window tail, double tol,
                                           const IntegratorConfig& config = {});

struct EquiProbe {
  double epsilon = 0.0;
  TauRange range;
  std::vector<std::size_t> admitted_counts;
  std::vector<double> common;
  Density density;
  std::string note;
};

/// Intersection of the global admitted sets of several trajectories on a
/// common grid. A heuristic probe, not a certificate.
EquiProbe equi_almost_periodicity_probe(const std::vector<Trajectory>& trajs, double eps,
                                        const TauRange& range, unsigned threads = 1);

}  // namespace remrec
