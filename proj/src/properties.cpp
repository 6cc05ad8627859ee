#include "remrec/properties.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace remrec {

const char* to_string(Direction d) {
  return d == Direction::NonDecreasing ? "non-decreasing" : "non-increasing";
}

namespace {
std::string grid_note(std::span<const double> ts, std::span<const double> xs) {
  std::ostringstream os;
  os << "empirical: " << ts.size() << " times";
  if (!ts.empty()) os << " in [" << ts.front() << ", " << ts.back() << "]";
  os << ", " << xs.size() << " states";
  if (!xs.empty()) os << " in [" << xs.front() << ", " << xs.back() << "]";
  return os.str();
}
}  // namespace

PropertyReport check_monotone_in_x(const ScalarField& field, std::span<const double> t_grid,
                                   std::span<const double> x_grid, Direction direction) {
  constexpr double slack = 1e-12;
  if (!std::is_sorted(x_grid.begin(), x_grid.end()))
    throw std::invalid_argument("x-grid must be sorted ascending");
  PropertyReport r;
  r.property = std::string("monotone ") + to_string(direction) + " in x";
  r.tolerance = slack;
  r.extreme = -std::numeric_limits<double>::infinity();
  std::size_t skipped = 0;
  for (double t : t_grid) {
    for (std::size_t i = 0; i + 1 < x_grid.size(); ++i) {
      const double x1 = x_grid[i];
      const double x2 = x_grid[i + 1];
      if (!field.admissible(t, x1) || !field.admissible(t, x2)) {
        ++skipped;
        continue;
      }
      const double f1 = field(t, x1);
      const double f2 = field(t, x2);
      const double violation = direction == Direction::NonDecreasing ? f1 - f2 : f2 - f1;
      ++r.samples;
      if (violation > r.extreme) {
        r.extreme = violation;
        r.witness = Witness{t, x1, x2};
      }
    }
  }
  if (r.samples == 0) {
    r.verdict = Verdict::Inconclusive;
    r.extreme = 0.0;
    r.witness.reset();
  } else {
    r.verdict = r.extreme <= slack ? Verdict::Pass : Verdict::Fail;
  }
  r.note = grid_note(t_grid, x_grid);
  if (skipped) r.note += ", " + std::to_string(skipped) + " inadmissible pairs skipped";
  return r;
}

PropertyReport check_lipschitz_one(const ScalarField& field, std::span<const double> t_grid,
                                   std::span<const double> x_grid) {
  constexpr double slack = 1e-12;
  PropertyReport r;
  r.property = "Lipschitz constant <= 1 in x";
  r.tolerance = slack;
  bool violated = false;
  std::vector<double> f(x_grid.size());
  std::vector<char> ok(x_grid.size());
  for (double t : t_grid) {
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
      ok[i] = field.admissible(t, x_grid[i]);
      if (ok[i]) f[i] = field(t, x_grid[i]);
    }
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
      if (!ok[i]) continue;
      for (std::size_t j = i + 1; j < x_grid.size(); ++j) {
        if (!ok[j]) continue;
        const double dx = std::fabs(x_grid[i] - x_grid[j]);
        if (dx == 0.0) continue;
        const double df = std::fabs(f[i] - f[j]);
        const double ratio = df / dx;
        ++r.samples;
        if (df > dx * (1.0 + slack)) violated = true;
        if (ratio > r.extreme || !r.witness) {
          r.extreme = ratio;
          r.witness = Witness{t, x_grid[i], x_grid[j]};
        }
      }
    }
  }
  if (r.samples == 0) {
    r.verdict = Verdict::Inconclusive;
  } else {
    r.verdict = violated ? Verdict::Fail : Verdict::Pass;
  }
  r.note = grid_note(t_grid, x_grid);
  return r;
}

ContractionResult contraction_gap(const Trajectory& a, const Trajectory& b) {
  if (a.kind() != b.kind() || a.t0() != b.t0() || a.step() != b.step() || a.size() != b.size())
    throw std::invalid_argument("contraction_gap needs trajectories on a common grid");
  const double initial = std::fabs(a.values().front() - b.values().front());
  if (initial == 0.0) throw std::invalid_argument("contraction_gap needs u1 != u2");
  const double tol = 1e-9 * (1.0 + initial);

  ContractionResult out;
  auto& s = out.series;
  s.times.reserve(a.size());
  s.gaps.reserve(a.size());
  PropertyReport& r = out.report;
  r.property = "contraction |phi(t,u1)-phi(t,u2)| <= |u1-u2|, non-increasing";
  r.tolerance = tol;
  r.samples = a.size();
  double worst_growth = -std::numeric_limits<double>::infinity();
  double worst_ratio = 0.0;
  std::optional<Witness> growth_witness, ratio_witness;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double g = std::fabs(a.values()[k] - b.values()[k]);
    s.times.push_back(a.time(k));
    s.gaps.push_back(g);
    if (g / initial > worst_ratio || !ratio_witness) {
      worst_ratio = g / initial;
      ratio_witness = Witness{a.time(k), a.values()[k], b.values()[k]};
    }
    if (k > 0) {
      const double growth = g - s.gaps[k - 1];
      if (growth > worst_growth) {
        worst_growth = growth;
        growth_witness = Witness{a.time(k), a.values()[k], b.values()[k]};
      }
    }
  }
  const bool bounded = worst_ratio * initial <= initial * (1.0 + tol);
  const bool monotone = worst_growth <= tol;
  r.extreme = worst_ratio;
  r.verdict = bounded && monotone ? Verdict::Pass : Verdict::Fail;
  r.witness = !bounded ? ratio_witness : (!monotone ? growth_witness : ratio_witness);
  std::ostringstream note;
  note << "worst gap ratio " << worst_ratio << ", largest one-step growth " << worst_growth;
  r.note = note.str();
  return out;
}

ContractionResult contraction_gap(const ScalarField& field, double u1, double u2, double t0,
                                  double t1, const IntegratorConfig& config) {
  if (u1 == u2) throw std::invalid_argument("contraction_gap needs u1 != u2");
  if (field.kind() == TimeKind::Discrete) {
    if (t0 != 0.0) throw std::invalid_argument("discrete contraction_gap starts at n = 0");
    const auto steps = static_cast<long>(std::llround(t1));
    return contraction_gap(iterate(field, u1, steps), iterate(field, u2, steps));
  }
  const double u[] = {u1, u2};
  auto trajs = integrate_many(field, u, t0, t1, config);
  return contraction_gap(trajs[0], trajs[1]);
}

PropertyReport boundedness(const Trajectory& traj, double bound, double from) {
  PropertyReport r;
  r.property = "bounded by " + expr::format_number(bound);
  r.tolerance = 0.0;
  std::optional<std::size_t> first_cross;
  std::size_t argmax = 0;
  bool any = false;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.time(k) < from) continue;
    const double a = std::fabs(traj.values()[k]);
    ++r.samples;
    if (!any || a > r.extreme) {
      r.extreme = a;
      argmax = k;
      any = true;
    }
    if (!first_cross && a > bound) first_cross = k;
  }
  if (!any) {
    r.verdict = Verdict::Inconclusive;
    r.note = "no samples at or after t=" + expr::format_number(from);
    return r;
  }
  std::ostringstream note;
  note << "sup " << r.extreme << " at t=" << traj.time(argmax);
  if (!first_cross) {
    r.verdict = Verdict::Pass;
    r.witness = Witness{traj.time(argmax), traj.values()[argmax], bound};
    r.note = note.str();
    return r;
  }
  r.verdict = Verdict::Fail;
  const std::size_t k = *first_cross;
  double t_cross = traj.time(k);
  if (traj.kind() == TimeKind::Continuous && k > 0 && traj.time(k - 1) >= from) {
    double lo = traj.time(k - 1);
    double hi = traj.time(k);
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (std::fabs(traj.at(mid)) > bound ? hi : lo) = mid;
    }
    t_cross = hi;
  }
  r.witness = Witness{t_cross, traj.kind() == TimeKind::Continuous ? traj.at(t_cross) : traj.values()[k], bound};
  note << ", first exceeds bound at t=" << t_cross;
  r.note = note.str();
  return r;
}

}  // namespace remrec
