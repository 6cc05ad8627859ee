#include "remrec/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "remrec/hash.hpp"

namespace remrec {

const char* to_string(Method m) { return m == Method::Rk4Fixed ? "rk4-fixed" : "rkf45-adaptive"; }

Method parse_method(std::string_view name) {
  if (name == "rk4" || name == "rk4-fixed") return Method::Rk4Fixed;
  if (name == "rkf45" || name == "rkf45-adaptive") return Method::Rkf45;
  throw std::invalid_argument("unknown integration method '" + std::string(name) + "'");
}

void IntegratorConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw std::invalid_argument("tolerances must be positive");
  if (!(max_step > 0.0)) throw std::invalid_argument("max-step must be positive");
  if (!(output_step > 0.0)) throw std::invalid_argument("output step must be positive");
}

std::string IntegratorConfig::canonical() const {
  std::ostringstream os;
  os << "method=" << to_string(method) << ";atol=" << expr::format_number(abs_tol)
     << ";rtol=" << expr::format_number(rel_tol) << ";max_step=" << expr::format_number(max_step)
     << ";dt=" << expr::format_number(output_step);
  return os.str();
}

IntegrationError::IntegrationError(Kind kind, double last_good_time, std::string message)
    : std::runtime_error(std::move(message)), kind_(kind), last_good_time_(last_good_time) {}

namespace {

// Fehlberg 4(5) tableau.
constexpr double c2 = 1.0 / 4, c3 = 3.0 / 8, c4 = 12.0 / 13, c6 = 1.0 / 2;
constexpr double a21 = 1.0 / 4;
constexpr double a31 = 3.0 / 32, a32 = 9.0 / 32;
constexpr double a41 = 1932.0 / 2197, a42 = -7200.0 / 2197, a43 = 7296.0 / 2197;
constexpr double a51 = 439.0 / 216, a52 = -8.0, a53 = 3680.0 / 513, a54 = -845.0 / 4104;
constexpr double a61 = -8.0 / 27, a62 = 2.0, a63 = -3544.0 / 2565, a64 = 1859.0 / 4104,
                 a65 = -11.0 / 40;
constexpr double b1 = 16.0 / 135, b3 = 6656.0 / 12825, b4 = 28561.0 / 56430, b5 = -9.0 / 50,
                 b6 = 2.0 / 55;
// fifth- minus fourth-order weights
constexpr double e1 = 16.0 / 135 - 25.0 / 216, e3 = 6656.0 / 12825 - 1408.0 / 2565,
                 e4 = 28561.0 / 56430 - 2197.0 / 4104, e5 = -9.0 / 50 + 1.0 / 5, e6 = 2.0 / 55;

class Stepper {
 public:
  explicit Stepper(const ScalarField& f) : f_(f) {}

  double eval(double t, double x) const {
    try {
      return f_(t, x);
    } catch (const std::exception& e) {
      throw IntegrationError(IntegrationError::Kind::Domain, t,
                             std::string("field evaluation failed: ") + e.what());
    }
  }

  // One RK4 step for every member, in place.
  void rk4(double t, double h, std::vector<double>& x) {
    for (std::size_t m = 0; m < x.size(); ++m) {
      const double k1 = eval(t, x[m]);
      const double k2 = eval(t + h / 2, x[m] + h / 2 * k1);
      const double k3 = eval(t + h / 2, x[m] + h / 2 * k2);
      const double k4 = eval(t + h, x[m] + h * k3);
      x[m] += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
  }

  // Fehlberg step; writes the fifth-order solution to `out` and returns the
  // scaled error norm.
  double rkf45(double t, double h, const std::vector<double>& x, std::vector<double>& out,
               double atol, double rtol) {
    double norm = 0.0;
    for (std::size_t m = 0; m < x.size(); ++m) {
      const double y = x[m];
      const double k1 = eval(t, y);
      const double k2 = eval(t + c2 * h, y + h * a21 * k1);
      const double k3 = eval(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
      const double k4 = eval(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      const double k5 = eval(t + h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const double k6 =
          eval(t + c6 * h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      out[m] = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const double err = std::fabs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6));
      const double scale = atol + rtol * std::max(std::fabs(y), std::fabs(out[m]));
      norm = std::max(norm, err / scale);
    }
    return norm;
  }

 private:
  const ScalarField& f_;
};

void check_state(const ScalarField& field, double t, double t_prev, const std::vector<double>& x) {
  for (double v : x) {
    if (!std::isfinite(v) || std::fabs(v) > kBlowUpGuard) {
      std::ostringstream os;
      os << "solution exceeded |x| = " << kBlowUpGuard << " near t=" << t << " (last good t=" << t_prev
         << ")";
      throw IntegrationError(IntegrationError::Kind::BlowUp, t_prev, os.str());
    }
    if (!field.admissible(t, v)) {
      std::ostringstream os;
      os << "solution left the state domain at t=" << t << " (x=" << v << ")";
      throw IntegrationError(IntegrationError::Kind::Domain, t_prev, os.str());
    }
  }
}

}  // namespace

std::vector<Trajectory> integrate_many(const ScalarField& field, std::span<const double> u0s,
                                       double t0, double t1, const IntegratorConfig& config) {
  config.validate();
  if (field.kind() != TimeKind::Continuous)
    throw std::invalid_argument("integrate needs a continuous field; use iterate for maps");
  if (!(t1 > t0)) throw std::invalid_argument("integration span must have t1 > t0");
  if (u0s.empty()) throw std::invalid_argument("no initial values");

  const double dt = config.output_step;
  const auto intervals = static_cast<std::size_t>(std::max(1.0, std::ceil((t1 - t0) / dt - 1e-9)));
  const std::size_t members = u0s.size();

  std::vector<double> x(u0s.begin(), u0s.end());
  check_state(field, t0, t0, x);
  std::vector<std::vector<double>> values(members), derivs(members);
  Stepper stepper(field);
  for (std::size_t m = 0; m < members; ++m) {
    values[m].reserve(intervals + 1);
    derivs[m].reserve(intervals + 1);
    values[m].push_back(x[m]);
    derivs[m].push_back(stepper.eval(t0, x[m]));
  }

  std::vector<double> trial(members);
  double h = std::min(dt, config.max_step);
  double max_abs = 0.0;
  for (double v : x) max_abs = std::max(max_abs, std::fabs(v));

  for (std::size_t k = 0; k < intervals; ++k) {
    const double ta = t0 + dt * static_cast<double>(k);
    const double tb = t0 + dt * static_cast<double>(k + 1);
    double t = ta;
    if (config.method == Method::Rk4Fixed) {
      const auto sub = static_cast<int>(std::max(1.0, std::ceil(dt / config.max_step - 1e-9)));
      const double hs = (tb - ta) / sub;
      for (int i = 0; i < sub; ++i) {
        const double tn = (i + 1 == sub) ? tb : ta + hs * (i + 1);
        stepper.rk4(t, tn - t, x);
        check_state(field, tn, t, x);
        t = tn;
      }
    } else {
      while (t < tb) {
        const double remaining = tb - t;
        const bool clipped = h >= remaining;
        const double hs = clipped ? remaining : h;
        const double err = stepper.rkf45(t, hs, x, trial, config.abs_tol, config.rel_tol);
        const double factor =
            err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (err <= 1.0) {
          const double tn = clipped ? tb : t + hs;
          check_state(field, tn, t, trial);
          x.swap(trial);
          t = tn;
          const double proposal = hs * factor;
          h = clipped ? std::max(h, proposal) : proposal;
        } else {
          h = hs * factor;
          if (h < 1e-12 * std::max(1.0, std::fabs(t))) {
            std::ostringstream os;
            os << "step size underflow at t=" << t;
            throw IntegrationError(IntegrationError::Kind::StepUnderflow, t, os.str());
          }
        }
        h = std::min(h, config.max_step);
      }
    }
    for (std::size_t m = 0; m < members; ++m) {
      values[m].push_back(x[m]);
      derivs[m].push_back(stepper.eval(tb, x[m]));
      max_abs = std::max(max_abs, std::fabs(x[m]));
    }
  }

  const double budget = 10.0 * (config.abs_tol + config.rel_tol * max_abs);
  const std::string hash = config_hash(field.describe() + "|" + config.canonical());
  std::vector<Trajectory> out;
  out.reserve(members);
  for (std::size_t m = 0; m < members; ++m)
    out.emplace_back(TimeKind::Continuous, t0, dt, std::move(values[m]), std::move(derivs[m]),
                     Provenance{field.id(), u0s[m], hash}, budget);
  return out;
}

Trajectory integrate(const ScalarField& field, double u0, double t0, double t1,
                     const IntegratorConfig& config) {
  const double u[] = {u0};
  return std::move(integrate_many(field, u, t0, t1, config).front());
}

Trajectory iterate(const ScalarField& field, double u0, long steps) {
  if (field.kind() != TimeKind::Discrete)
    throw std::invalid_argument("iterate needs a discrete field; use integrate for ODEs");
  if (steps < 1) throw std::invalid_argument("iterate needs at least one step");
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(steps) + 1);
  v.push_back(u0);
  double x = u0;
  for (long k = 0; k < steps; ++k) {
    const auto t = static_cast<double>(k);
    if (!field.admissible(t, x)) {
      std::ostringstream os;
      os << "iterate left the state domain at step " << k << " (x=" << x << ")";
      throw IntegrationError(IntegrationError::Kind::Domain, t, os.str());
    }
    double next = 0.0;
    try {
      next = field(t, x);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "field evaluation failed at step " << k << ": " << e.what();
      throw IntegrationError(IntegrationError::Kind::Domain, t, os.str());
    }
    if (!std::isfinite(next) || std::fabs(next) > kBlowUpGuard) {
      std::ostringstream os;
      os << "iterate exceeded |x| = " << kBlowUpGuard << " at step " << k + 1;
      throw IntegrationError(IntegrationError::Kind::BlowUp, t, os.str());
    }
    if (!field.state_domain().contains(next)) {
      std::ostringstream os;
      os << "iterate left the state domain at step " << k + 1 << " (x=" << next << ")";
      throw IntegrationError(IntegrationError::Kind::Domain, t, os.str());
    }
    v.push_back(next);
    x = next;
  }
  return Trajectory(TimeKind::Discrete, 0.0, 1.0, std::move(v), {},
                    Provenance{field.id(), u0, config_hash(field.describe() + "|iterate")});
}

Trajectory sample_function(std::string_view text, const expr::ParamMap& params, double t0,
                           double t1, double step) {
  if (!(t1 > t0) || !(step > 0.0)) throw std::invalid_argument("invalid sampling span");
  const auto e = expr::parse(text);
  const auto slots = e.bind(params);
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((t1 - t0) / step - 1e-9)));
  std::vector<double> v(n + 1), d(n + 1);
  // power-of-two offset: t +- h and t +- 2h stay exact for |t| < 2^40
  constexpr double h = 1.0 / 1024.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = t0 + step * static_cast<double>(k);
    v[k] = e.evaluate(t, 0.0, slots);
    const double fp1 = e.evaluate(t + h, 0.0, slots);
    const double fm1 = e.evaluate(t - h, 0.0, slots);
    const double fp2 = e.evaluate(t + 2 * h, 0.0, slots);
    const double fm2 = e.evaluate(t - 2 * h, 0.0, slots);
    d[k] = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
  }
  std::ostringstream id;
  id << text;
  return Trajectory(TimeKind::Continuous, t0, step, std::move(v), std::move(d),
                    Provenance{id.str(), 0.0, config_hash(std::string(text) + "|sample|" +
                                                          expr::format_number(step))});
}

}  // namespace remrec
