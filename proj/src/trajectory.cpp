#include "remrec/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace remrec {

namespace {

// Hermite error is bounded by h^4/384 * max|phi''''|; the fourth forward
// difference approximates h^4 * phi'''' at sample points only, so the
// observed maximum gets a factor 2 of headroom.
double hermite_budget(const std::vector<double>& v) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 4 < v.size(); ++i) {
    const double d4 = v[i + 4] - 4.0 * v[i + 3] + 6.0 * v[i + 2] - 4.0 * v[i + 1] + v[i];
    worst = std::max(worst, std::fabs(d4));
  }
  return 2.0 * worst / 384.0;
}

}  // namespace

Trajectory::Trajectory(TimeKind kind, double t0, double step, std::vector<double> values,
                       std::vector<double> derivatives, Provenance provenance,
                       double integration_budget)
    : kind_(kind),
      t0_(t0),
      step_(step),
      values_(std::move(values)),
      derivs_(std::move(derivatives)),
      provenance_(std::move(provenance)),
      integration_budget_(integration_budget) {
  if (values_.size() < 2) throw std::invalid_argument("trajectory needs at least two samples");
  if (!(step_ > 0.0) || !std::isfinite(step_) || !std::isfinite(t0_))
    throw std::invalid_argument("trajectory step must be positive and finite");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("trajectory contains a non-finite value");
  if (kind_ == TimeKind::Continuous) {
    if (derivs_.size() != values_.size())
      throw std::invalid_argument("continuous trajectory needs one derivative per sample");
    for (double d : derivs_)
      if (!std::isfinite(d)) throw std::invalid_argument("trajectory contains a non-finite derivative");
    error_budget_ = hermite_budget(values_) + integration_budget_;
  } else {
    if (step_ != 1.0) throw std::invalid_argument("discrete trajectories use unit steps");
    if (!derivs_.empty()) throw std::invalid_argument("discrete trajectories carry no derivatives");
    error_budget_ = integration_budget_;
  }
}

double Trajectory::position(double t) const noexcept {
  const double s = (t - t0_) / step_;
  const double r = std::nearbyint(s);
  return std::fabs(s - r) <= 1e-9 ? r : s;
}

double Trajectory::at(double t) const {
  const double s = position(t);
  const double last = static_cast<double>(values_.size() - 1);
  if (!(s >= 0.0 && s <= last)) {
    std::ostringstream os;
    os << "t=" << t << " outside trajectory span [" << t0_ << ", " << t_end() << "]";
    throw SpanError(os.str());
  }
  const double fl = std::floor(s);
  if (fl == s) return values_[static_cast<std::size_t>(s)];
  if (kind_ == TimeKind::Discrete) {
    std::ostringstream os;
    os << "discrete trajectory sampled at non-integer time t=" << t;
    throw SpanError(os.str());
  }
  const auto i = static_cast<std::size_t>(fl);
  const double u = s - fl;
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  const double h10 = u3 - 2.0 * u2 + u;
  const double h01 = -2.0 * u3 + 3.0 * u2;
  const double h11 = u3 - u2;
  return h00 * values_[i] + h10 * step_ * derivs_[i] + h01 * values_[i + 1] +
         h11 * step_ * derivs_[i + 1];
}

Trajectory Trajectory::scaled(double c) const {
  std::vector<double> v(values_);
  std::vector<double> d(derivs_);
  for (auto& a : v) a *= c;
  for (auto& a : d) a *= c;
  return Trajectory(kind_, t0_, step_, std::move(v), std::move(d), provenance_,
                    integration_budget_ * std::fabs(c));
}

Trajectory Trajectory::time_shifted(double s) const {
  return Trajectory(kind_, t0_ - s, step_, values_, derivs_, provenance_, integration_budget_);
}

}  // namespace remrec
