#pragma once

#include <cstdint>
#include <vector>

#include "remrec/trajectory.hpp"

namespace remrec::detail {

/// Grid maxima of |phi(t+tau) - phi(t)| over t = t0 + j*delta, j in
/// [j_lo, j_hi]. Continuous trajectories use branch and bound with a
/// rigorous slope bound of the Hermite interpolant, so the result equals
/// the brute-force grid maximum.
class SupEngine {
 public:
  explicit SupEngine(const Trajectory& traj);

  struct Max {
    double value = 0.0;
    double t = 0.0;
  };

  Max grid_max(double tau, std::int64_t j_lo, std::int64_t j_hi, double delta) const;

  /// True iff some grid point has |g| > eps; `where` receives that point.
  bool exceeds(double tau, std::int64_t j_lo, std::int64_t j_hi, double delta, double eps,
               double* where = nullptr) const;

  const Trajectory& trajectory() const noexcept { return traj_; }

  /// |phi(t+tau) - phi(t)| at a single time.
  double diff(double t, double tau) const;

 private:
  struct Block {
    std::int64_t lo, hi, c;
    double gc, ub;
  };

  double slope(double a, double b) const;
  Block make_block(std::int64_t lo, std::int64_t hi, double tau, double delta) const;
  bool discrete_fast(double tau, double delta) const;

  const Trajectory& traj_;
  std::size_t leaves_ = 0;
  std::vector<double> tree_;
};

}  // namespace remrec::detail
