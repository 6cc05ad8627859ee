#pragma once

#include <span>
#include <vector>

#include "remrec/field.hpp"
#include "remrec/integrate.hpp"
#include "remrec/trajectory.hpp"
#include "remrec/verdict.hpp"

namespace remrec {

enum class Direction { NonDecreasing, NonIncreasing };

const char* to_string(Direction d);

/// Empirical monotonicity of f(t, .) on consecutive pairs of a sorted x-grid.
PropertyReport check_monotone_in_x(const ScalarField& field, std::span<const double> t_grid,
                                   std::span<const double> x_grid, Direction direction);

/// Empirical Lipschitz-one test over all pairs of the x-grid. `extreme`
/// holds the largest observed ratio |f(t,x1)-f(t,x2)| / |x1-x2|.
PropertyReport check_lipschitz_one(const ScalarField& field, std::span<const double> t_grid,
                                   std::span<const double> x_grid);

struct GapSeries {
  std::vector<double> times;
  std::vector<double> gaps;
};

struct ContractionResult {
  GapSeries series;
  PropertyReport report;
};

/// g(t) = |phi(t,u1) - phi(t,u2)| on the sampling grid. For maps, `t1` is
/// the number of steps and t0 must be 0. Passes iff g <= |u1-u2|(1+tol)
/// and g is non-increasing within tol, tol = 1e-9 (1 + |u1-u2|).
ContractionResult contraction_gap(const ScalarField& field, double u1, double u2, double t0,
                                  double t1, const IntegratorConfig& config = {});

/// The same check on two already computed trajectories sharing a grid.
ContractionResult contraction_gap(const Trajectory& a, const Trajectory& b);

/// Passes iff sup |values| <= bound over samples with t >= from. The
/// witness is the first time the bound is crossed (refined on the dense
/// output for continuous trajectories); `extreme` is the sup.
PropertyReport boundedness(const Trajectory& traj, double bound, double from = -1e300);

}  // namespace remrec
