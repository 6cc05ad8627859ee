#include "remrec/field.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace remrec {

namespace {
constexpr std::size_t kMaxSlots = 32;

bool near_integer(double t) { return std::fabs(t - std::nearbyint(t)) <= 1e-9; }
}  // namespace

const char* to_string(TimeKind kind) {
  return kind == TimeKind::Continuous ? "continuous" : "discrete";
}

// ---------------------------------------------------------------------------
// Sequence

Sequence Sequence::from_expression(std::string name, std::string_view text,
                                   const expr::ParamMap& params) {
  Sequence s;
  s.name_ = std::move(name);
  auto e = std::make_shared<expr::Expression>(expr::parse(text));
  if (e->uses_x()) throw FieldError("sequence '" + s.name_ + "' may only depend on n");
  try {
    s.slots_ = e->bind(params);
  } catch (const expr::ExprError& err) {
    throw FieldError("sequence '" + s.name_ + "': " + err.what());
  }
  s.expr_ = std::move(e);
  return s;
}

Sequence Sequence::from_list(std::string name, std::vector<double> values) {
  if (values.empty()) throw FieldError("sequence '" + name + "' needs at least one value");
  Sequence s;
  s.name_ = std::move(name);
  s.list_ = std::move(values);
  return s;
}

double Sequence::at(double t) const {
  if (!list_.empty()) {
    const auto n = static_cast<long long>(std::llround(t));
    const auto size = static_cast<long long>(list_.size());
    return list_[static_cast<std::size_t>(((n % size) + size) % size)];
  }
  return expr_->evaluate(t, 0.0, slots_);
}

std::string Sequence::describe() const {
  if (expr_) return expr_->source();
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < list_.size(); ++i)
    os << (i ? "," : "") << expr::format_number(list_[i]);
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// ScalarField

struct SlotPlan {
  std::vector<double> base;
  std::vector<std::pair<std::size_t, std::size_t>> from_sequence;  // slot, sequence index
};

struct ScalarField::Impl {
  FieldSpec spec;
  expr::Expression rhs;
  SlotPlan rhs_slots;
  std::optional<expr::Expression> guard;
  SlotPlan guard_slots;

  double eval_with(const expr::Expression& e, const SlotPlan& plan, double t, double x) const {
    if (plan.from_sequence.empty()) return e.evaluate(t, x, plan.base);
    std::array<double, kMaxSlots> buf{};
    std::copy(plan.base.begin(), plan.base.end(), buf.begin());
    for (const auto& [slot, seq] : plan.from_sequence) buf[slot] = spec.sequences[seq].at(t);
    return e.evaluate(t, x, std::span<const double>(buf.data(), plan.base.size()));
  }
};

namespace {

SlotPlan plan_slots(const expr::Expression& e, const FieldSpec& spec, const char* what) {
  SlotPlan plan;
  if (e.parameters().size() > kMaxSlots) throw FieldError(std::string(what) + ": too many parameters");
  plan.base.resize(e.parameters().size(), 0.0);
  for (std::size_t i = 0; i < e.parameters().size(); ++i) {
    const auto& name = e.parameters()[i];
    if (auto it = spec.params.find(name); it != spec.params.end()) {
      plan.base[i] = it->second;
      continue;
    }
    bool found = false;
    for (std::size_t s = 0; s < spec.sequences.size(); ++s) {
      if (spec.sequences[s].name() == name) {
        plan.from_sequence.emplace_back(i, s);
        found = true;
        break;
      }
    }
    if (!found) throw FieldError(std::string(what) + ": parameter '" + name + "' is not bound");
  }
  return plan;
}

std::vector<double> validation_times(const FieldSpec& spec) {
  std::vector<double> ts = {0.0, 1.0, 2.0, 5.0, 10.0, 100.0};
  if (spec.kind == TimeKind::Continuous) ts.insert(ts.end(), {0.5, 3.7, 1e3});
  if (spec.time == TimeDomain::FullLine) {
    const auto n = ts.size();
    for (std::size_t i = 0; i < n; ++i)
      if (ts[i] > 0) ts.push_back(-ts[i]);
  }
  return ts;
}

std::vector<double> validation_states(const StateDomain& d) {
  const bool lo_finite = std::isfinite(d.lo);
  const bool hi_finite = std::isfinite(d.hi);
  if (lo_finite && hi_finite) {
    std::vector<double> xs;
    for (int i = 0; i <= 4; ++i) xs.push_back(d.lo + (d.hi - d.lo) * i / 4.0);
    return xs;
  }
  if (lo_finite) return {d.lo, d.lo + 0.5, d.lo + 1.0, d.lo + 2.0, d.lo + 10.0};
  if (hi_finite) return {d.hi, d.hi - 0.5, d.hi - 1.0, d.hi - 2.0, d.hi - 10.0};
  return {-10.0, -1.0, 0.0, 0.5, 1.0, 10.0};
}

}  // namespace

ScalarField::ScalarField(FieldSpec spec) {
  auto impl = std::make_shared<Impl>();
  try {
    impl->rhs = expr::parse(spec.rhs);
    if (spec.guard) impl->guard = expr::parse(*spec.guard);
  } catch (const expr::ExprError& e) {
    throw FieldError(std::string("cannot parse field: ") + e.what());
  }
  if (spec.state.lo > spec.state.hi) throw FieldError("empty state domain");
  impl->spec = std::move(spec);
  impl->rhs_slots = plan_slots(impl->rhs, impl->spec, "rhs");
  if (impl->guard) impl->guard_slots = plan_slots(*impl->guard, impl->spec, "guard");
  if (impl->spec.id.empty()) impl->spec.id = impl->spec.rhs;
  impl_ = std::move(impl);

  for (double t : validation_times(impl_->spec)) {
    for (double x : validation_states(impl_->spec.state)) {
      if (!admissible(t, x)) continue;
      try {
        (void)raw(t, x);
      } catch (const expr::ExprError& e) {
        std::ostringstream os;
        os << "field '" << impl_->spec.id << "' fails validation at t=" << t << ", x=" << x
           << ": " << e.what();
        throw FieldError(os.str());
      }
    }
  }
}

ScalarField ScalarField::ode(std::string_view rhs, const expr::ParamMap& params) {
  FieldSpec s;
  s.kind = TimeKind::Continuous;
  s.rhs = std::string(rhs);
  s.params = params;
  return ScalarField(std::move(s));
}

ScalarField ScalarField::map(std::string_view rhs, const expr::ParamMap& params) {
  FieldSpec s;
  s.kind = TimeKind::Discrete;
  s.rhs = std::string(rhs);
  s.params = params;
  return ScalarField(std::move(s));
}

double ScalarField::raw(double t, double x) const {
  if (impl_->spec.kind == TimeKind::Discrete && !near_integer(t))
    throw FieldError("discrete field evaluated at non-integer time");
  return impl_->eval_with(impl_->rhs, impl_->rhs_slots, t, x);
}

double ScalarField::operator()(double t, double x) const { return raw(t + shift_, x); }

bool ScalarField::admissible(double t, double x) const noexcept {
  if (!impl_->spec.state.contains(x)) return false;
  if (!impl_->guard) return true;
  try {
    return impl_->eval_with(*impl_->guard, impl_->guard_slots, t + shift_, x) >=
           impl_->spec.guard_min;
  } catch (...) {
    return false;
  }
}

TimeKind ScalarField::kind() const noexcept { return impl_->spec.kind; }
TimeDomain ScalarField::time_domain() const noexcept { return impl_->spec.time; }
const StateDomain& ScalarField::state_domain() const noexcept { return impl_->spec.state; }
const std::string& ScalarField::id() const noexcept { return impl_->spec.id; }
const FieldSpec& ScalarField::spec() const noexcept { return impl_->spec; }

ScalarField ScalarField::shifted(double h) const {
  if (impl_->spec.time == TimeDomain::HalfLine && h < 0.0)
    throw FieldError("half-line fields only admit forward shifts (h >= 0)");
  if (impl_->spec.kind == TimeKind::Discrete && !near_integer(h))
    throw FieldError("discrete fields only admit integer shifts");
  return ScalarField(impl_, shift_ + h);
}

std::string ScalarField::describe() const {
  std::ostringstream os;
  os << impl_->spec.rhs;
  bool first = true;
  for (const auto& [name, value] : impl_->spec.params) {
    os << (first ? " ; " : ", ") << name << "=" << expr::format_number(value);
    first = false;
  }
  for (const auto& s : impl_->spec.sequences) {
    os << (first ? " ; " : ", ") << s.name() << "(n)=" << s.describe();
    first = false;
  }
  if (shift_ != 0.0) os << " ; shift=" << expr::format_number(shift_);
  return os.str();
}

ScalarField shift_field(const ScalarField& field, double h) { return field.shifted(h); }

}  // namespace remrec
