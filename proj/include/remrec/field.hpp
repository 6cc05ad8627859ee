#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "remrec/expr.hpp"

namespace remrec {

enum class TimeKind { Continuous, Discrete };
enum class TimeDomain { HalfLine, FullLine };

const char* to_string(TimeKind kind);

struct StateDomain {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  static StateDomain nonnegative() { return {0.0, std::numeric_limits<double>::infinity()}; }
};

/// Raised when a field cannot be built or evaluated on its declared domain.
class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A coefficient sequence K(n) bound to a parameter name of the right-hand
/// side: either an expression in `n` (alias of `t`) or an explicit list that
/// repeats periodically.
class Sequence {
 public:
  static Sequence from_expression(std::string name, std::string_view text,
                                  const expr::ParamMap& params = {});
  static Sequence from_list(std::string name, std::vector<double> values);

  const std::string& name() const noexcept { return name_; }
  double at(double t) const;
  std::string describe() const;
  bool is_list() const noexcept { return !list_.empty(); }

 private:
  std::string name_;
  std::shared_ptr<const expr::Expression> expr_;
  std::vector<double> slots_;
  std::vector<double> list_;
};

struct FieldSpec {
  TimeKind kind = TimeKind::Continuous;
  std::string rhs;
  expr::ParamMap params;
  std::vector<Sequence> sequences;
  StateDomain state;
  TimeDomain time = TimeDomain::HalfLine;
  /// Optional expression that must stay >= guard_min wherever the field is
  /// evaluated (Beverton-Holt denominators).
  std::optional<std::string> guard;
  double guard_min = 1e-12;
  std::string id;
};

/// Right-hand side f(t, x) of u' = f(t, u) or u(t+1) = f(t, u(t)).
/// Copies share the parsed expression; shifted copies f^h(t, x) = f(t+h, x)
/// only differ in the stored offset.
class ScalarField {
 public:
  explicit ScalarField(FieldSpec spec);

  static ScalarField ode(std::string_view rhs, const expr::ParamMap& params = {});
  static ScalarField map(std::string_view rhs, const expr::ParamMap& params = {});

  double operator()(double t, double x) const;

  /// State-domain and guard test at (t, x), no throw.
  bool admissible(double t, double x) const noexcept;

  TimeKind kind() const noexcept;
  TimeDomain time_domain() const noexcept;
  const StateDomain& state_domain() const noexcept;
  double shift() const noexcept { return shift_; }
  const std::string& id() const noexcept;
  const FieldSpec& spec() const noexcept;

  /// f^h with f^h(t, x) = f(t + h, x).
  ScalarField shifted(double h) const;

  /// Expression text plus parameter bindings; enough to rebuild the field.
  std::string describe() const;

 private:
  struct Impl;
  ScalarField(std::shared_ptr<const Impl> impl, double shift) : impl_(std::move(impl)), shift_(shift) {}
  double raw(double t, double x) const;
  std::shared_ptr<const Impl> impl_;
  double shift_ = 0.0;
};

ScalarField shift_field(const ScalarField& field, double h);

}  // namespace remrec
