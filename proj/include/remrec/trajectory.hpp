#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "remrec/field.hpp"

namespace remrec {

struct Provenance {
  std::string field_id;
  double u0 = 0.0;
  std::string config_hash;
};

class SpanError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Uniformly sampled solution path phi(t0 + k*step). Continuous
/// trajectories carry the derivative at every node and interpolate with
/// cubic Hermite polynomials; discrete ones are only defined at integers.
class Trajectory {
 public:
  Trajectory(TimeKind kind, double t0, double step, std::vector<double> values,
             std::vector<double> derivatives = {}, Provenance provenance = {},
             double integration_budget = 0.0);

  TimeKind kind() const noexcept { return kind_; }
  double t0() const noexcept { return t0_; }
  double step() const noexcept { return step_; }
  double t_end() const noexcept { return t0_ + step_ * static_cast<double>(values_.size() - 1); }
  std::size_t size() const noexcept { return values_.size(); }
  double time(std::size_t k) const noexcept { return t0_ + step_ * static_cast<double>(k); }

  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& derivatives() const noexcept { return derivs_; }
  const Provenance& provenance() const noexcept { return provenance_; }

  /// Value at arbitrary t in [t0, t_end]. Grid points return the stored
  /// value exactly; throws SpanError outside the span (or at a non-integer
  /// time for discrete trajectories).
  double at(double t) const;

  /// Fractional node position (t - t0) / step, snapped to the nearest
  /// integer when within 1e-9.
  double position(double t) const noexcept;

  /// Estimated pointwise error of `at`: interpolation error of the Hermite
  /// interpolant plus the error budget reported by the producer.
  double error_budget() const noexcept { return error_budget_; }

  /// Same path with every value multiplied by c.
  Trajectory scaled(double c) const;

  /// psi(t) = phi(t + s): identical samples, time origin moved to t0 - s.
  Trajectory time_shifted(double s) const;

 private:
  TimeKind kind_;
  double t0_;
  double step_;
  std::vector<double> values_;
  std::vector<double> derivs_;
  Provenance provenance_;
  double integration_budget_ = 0.0;
  double error_budget_ = 0.0;
};

}  // namespace remrec
