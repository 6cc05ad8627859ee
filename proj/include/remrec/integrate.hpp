#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "remrec/field.hpp"
#include "remrec/trajectory.hpp"

namespace remrec {

enum class Method { Rk4Fixed, Rkf45 };

const char* to_string(Method m);
Method parse_method(std::string_view name);

struct IntegratorConfig {
  Method method = Method::Rkf45;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double max_step = 1.0;
  double output_step = 0.01;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
  /// Stable text form, used for config hashing.
  std::string canonical() const;
};

/// Solution left the admissible region. `last_good_time` is the last time
/// at which the state was finite and admissible.
class IntegrationError : public std::runtime_error {
 public:
  enum class Kind { BlowUp, StepUnderflow, Domain };
  IntegrationError(Kind kind, double last_good_time, std::string message);
  Kind kind() const noexcept { return kind_; }
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  Kind kind_;
  double last_good_time_;
};

inline constexpr double kBlowUpGuard = 1e12;

/// Integrates u' = f(t, u) from t0 to (at least) t1, sampling at
/// t0 + k*output_step. Internal steps never straddle an output node, so
/// node values come straight from the integrator.
Trajectory integrate(const ScalarField& field, double u0, double t0, double t1,
                     const IntegratorConfig& config);

/// Several initial values integrated together with one shared step-size
/// sequence (error norm is the max over members).
std::vector<Trajectory> integrate_many(const ScalarField& field, std::span<const double> u0s,
                                       double t0, double t1, const IntegratorConfig& config);

/// Exact recursion u(k+1) = f(k, u(k)) for k = 0..steps-1.
Trajectory iterate(const ScalarField& field, double u0, long steps);

/// Samples an explicit function phi(t) given as expression text in t on
/// [t0, t1] with spacing `step`; node derivatives from a fourth-order
/// central difference.
Trajectory sample_function(std::string_view text, const expr::ParamMap& params, double t0,
                           double t1, double step);

}  // namespace remrec
