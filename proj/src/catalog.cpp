#include "remrec/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace remrec {

const char* to_string(ExampleKind k) {
  switch (k) {
    case ExampleKind::Function: return "function";
    case ExampleKind::Ode: return "ode";
    case ExampleKind::Difference: return "difference";
  }
  return "?";
}

namespace {

// |sin A - sin B| <= |A - B| = |A^3 - B^3| / (A^2 + AB + B^2) with
// A^3 - B^3 = tau (2t + tau).
constexpr const char* kCubeRootBound =
    "abs(tau*(2*t+tau))/((pi^3+(t+tau)^2)^(2/3)+(pi^3+(t+tau)^2)^(1/3)*(pi^3+t^2)^(1/3)+(pi^3+t^2)^(2/3))";

std::vector<AnalyticExample> build_catalog() {
  std::vector<AnalyticExample> c;

  AnalyticExample ex;
  ex.name = "exI1";
  ex.kind = ExampleKind::Function;
  ex.definition = "sin(ln(1+abs(t)))";
  ex.oracle = ex.definition;
  ex.bound = "ln((1/abs(t)+abs(1+tau/abs(t)))/(1+1/abs(t)))";
  ex.expected = "remotely stationary; not almost periodic; not asymptotically stationary";
  ex.notes = "keeps hitting +-1 at t = e^(pi/2 + k pi) - 1 while increments flatten like ln(1 + tau/t)";
  ex.resolution = {0.02, 1e5, 0.0, {}};
  c.push_back(ex);

  ex = {};
  ex.name = "remODE1-2";
  ex.kind = ExampleKind::Function;
  ex.definition = "sin(t+ln(1+abs(t)))";
  ex.oracle = ex.definition;
  ex.expected = "remotely 2pi-periodic; remotely almost periodic; not asymptotically almost periodic";
  ex.notes = "phase drift ln(1+t) is unbounded but its increments vanish";
  ex.resolution = {0.05, 1e5, 0.0, {}};
  c.push_back(ex);

  ex = {};
  ex.name = "exAAP1";
  ex.kind = ExampleKind::Ode;
  ex.definition = "2*t*cos((t^2+pi^3)^(1/3))/(3*(t^2+pi^3)^(2/3))";
  ex.oracle = "x0+sin((t^2+pi^3)^(1/3))";
  ex.bound = kCubeRootBound;
  ex.expected = "remotely stationary; not asymptotically stationary";
  ex.notes = "x-independent right-hand side; increments decay like tau t^(-1/3), so the "
             "claim is checked with small probes at a loose eps";
  ex.resolution = {0.1, 1e5, 0.0, {1.0, std::numbers::sqrt2, 3.0}};
  c.push_back(ex);

  ex = {};
  ex.name = "massera";
  ex.kind = ExampleKind::Ode;
  ex.definition = "-x+sin(t)";
  ex.oracle = "(sin(t)-cos(t))/2+(x0+1/2)*exp(-t)";
  ex.expected = "asymptotically 2pi-periodic; remotely 2pi-periodic";
  ex.notes = "dissipative and 2pi-periodic in t; every solution approaches (sin t - cos t)/2";
  ex.resolution = {1e-4, 1e3, 5.0, {}};
  c.push_back(ex);

  ex = {};
  ex.name = "sine";
  ex.kind = ExampleKind::Function;
  ex.definition = "sin(t)";
  ex.oracle = ex.definition;
  ex.bound = "2*abs(sin(tau/2))";
  ex.expected = "almost periodic; not remotely stationary";
  ex.resolution = {0.05, 1e4, 0.0, {}};
  c.push_back(ex);

  ex = {};
  ex.name = "bh";
  ex.kind = ExampleKind::Difference;
  ex.definition = "mu*K*x/(K+(mu-1)*x)";
  ex.params = {{"mu", 2.0}};
  ex.sequences = {{"K", "10+sin(ln(1+n))"}};
  ex.expected = "bounded by mu beta/(mu-1); remotely stationary";
  ex.notes = "alpha=9, beta=11; flags: the contraction condition mu beta^2/alpha^2 <= 1 fails here, "
             "mu > 1 holds, so the run is outside the stated hypotheses";
  ex.resolution = {0.05, 1e5, 5.0, {}};
  c.push_back(ex);

  return c;
}

double eval_text(const std::string& text, double t, const expr::ParamMap& params) {
  const auto e = expr::parse(text);
  return e.evaluate(t, 0.0, e.bind(params));
}

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw std::invalid_argument("bad number for " + std::string(what) + ": '" + std::string(s) + "'");
  return v;
}

}  // namespace

const std::vector<AnalyticExample>& catalog() {
  static const std::vector<AnalyticExample> c = build_catalog();
  return c;
}

const AnalyticExample& find_example(std::string_view name) {
  for (const auto& ex : catalog())
    if (ex.name == name) return ex;
  std::string known;
  for (const auto& ex : catalog()) known += (known.empty() ? "" : ", ") + ex.name;
  throw std::out_of_range("unknown example '" + std::string(name) + "' (known: " + known + ")");
}

double oracle_value(const AnalyticExample& ex, double t, const expr::ParamMap& params) {
  if (!ex.oracle) throw std::invalid_argument("example " + ex.name + " has no closed form");
  expr::ParamMap p = ex.params;
  p.emplace("x0", 0.0);
  for (const auto& [k, v] : params) p[k] = v;
  return eval_text(*ex.oracle, t, p);
}

double tail_bound(const AnalyticExample& ex, double t, double tau) {
  if (!ex.bound) throw std::invalid_argument("example " + ex.name + " has no tail bound");
  if (!(t > 0.0)) throw std::invalid_argument("tail bound needs t > 0");
  if (tau == 0.0) return 0.0;
  return eval_text(*ex.bound, t, {{"tau", tau}});
}

std::pair<double, double> nonasymptotic_witnesses(int k) {
  if (k < 1) throw std::invalid_argument("witnesses need k >= 1 (negative radicand)");
  const double pi = std::numbers::pi;
  const double kd = static_cast<double>(k);
  const double r1 = std::max(0.0, std::pow(kd * pi, 3) - pi * pi * pi);
  const double r2 = std::pow(pi / 2 + 2 * kd * pi, 3) - pi * pi * pi;
  return {std::sqrt(r1), std::sqrt(r2)};
}

std::string BevertonHolt::report() const {
  std::ostringstream os;
  os << "mu=" << mu << " alpha=" << alpha << " beta=" << beta << "\n"
     << "  contraction condition mu*beta^2/alpha^2 = " << lipschitz_bound << (c3 ? " <= 1: holds" : " > 1: fails") << "\n"
     << "  mu > 1: " << (mu_above_one ? "holds" : "fails") << "\n";
  if (limsup_bound) os << "  limsup bound mu*beta/(mu-1) = " << *limsup_bound << "\n";
  if (!c3 && mu_above_one)
    os << "  regime: mu > 1 violates the contraction condition; remote recurrence is checked empirically\n";
  if (c3 && !mu_above_one) os << "  regime: the contraction condition forces mu < 1 and orbits decay to 0\n";
  return os.str();
}

BevertonHolt make_beverton_holt(const BevertonHoltParams& p) {
  if (!(p.mu > 0.0) || !std::isfinite(p.mu)) throw FieldError("Beverton-Holt needs mu > 0");
  Sequence K = [&] {
    if (!p.K_list.empty()) return Sequence::from_list("K", p.K_list);
    if (!p.K_expr.empty()) return Sequence::from_expression("K", p.K_expr);
    if (p.K) return Sequence::from_expression("K", expr::format_number(*p.K));
    throw FieldError("Beverton-Holt needs a capacity K");
  }();
  const long count = p.K_list.empty() ? std::max(1L, p.sample_count) : static_cast<long>(p.K_list.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (long n = 0; n < count; ++n) {
    const double k = K.at(static_cast<double>(n));
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  const double alpha = p.alpha.value_or(lo);
  const double beta = p.beta.value_or(hi);
  if (!(alpha > 0.0)) throw FieldError("Beverton-Holt needs alpha > 0");
  if (alpha > beta) throw FieldError("Beverton-Holt needs alpha <= beta");
  const double slack = 1e-12 * std::max(1.0, beta);
  if (lo < alpha - slack || hi > beta + slack) {
    std::ostringstream os;
    os << "sampled K_n range [" << lo << ", " << hi << "] leaves [alpha, beta] = [" << alpha << ", "
       << beta << "]";
    throw FieldError(os.str());
  }

  FieldSpec spec;
  spec.kind = TimeKind::Discrete;
  spec.rhs = "mu*K*x/(K+(mu-1)*x)";
  spec.params = {{"mu", p.mu}};
  spec.sequences = {K};
  spec.state = StateDomain::nonnegative();
  spec.guard = "K+(mu-1)*x";
  spec.id = "beverton-holt";

  const double lip = p.mu * beta * beta / (alpha * alpha);
  std::optional<double> limsup;
  if (p.mu > 1.0) limsup = p.mu * beta / (p.mu - 1.0);
  return BevertonHolt{ScalarField(std::move(spec)), p.mu, alpha, beta, lip <= 1.0, p.mu > 1.0, lip, limsup};
}

BevertonHoltParams parse_beverton_holt(std::string_view text) {
  BevertonHoltParams p;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view item = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("expected key=value in '" + std::string(item) + "'");
    const std::string_view key = item.substr(0, eq);
    const std::string_view val = item.substr(eq + 1);
    if (key == "mu") {
      p.mu = parse_double(val, key);
    } else if (key == "alpha") {
      p.alpha = parse_double(val, key);
    } else if (key == "beta") {
      p.beta = parse_double(val, key);
    } else if (key == "K") {
      if (val.starts_with("list:")) {
        std::string_view rest = val.substr(5);
        while (!rest.empty()) {
          const std::size_t semi = std::min(rest.find(';'), rest.size());
          p.K_list.push_back(parse_double(rest.substr(0, semi), key));
          rest = semi < rest.size() ? rest.substr(semi + 1) : std::string_view{};
        }
      } else {
        double v = 0.0;
        auto [q, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
        if (ec == std::errc() && q == val.data() + val.size())
          p.K = v;
        else
          p.K_expr = std::string(val);
      }
    } else {
      throw std::invalid_argument("unknown Beverton-Holt key '" + std::string(key) + "'");
    }
  }
  return p;
}

ScalarField example_field(const AnalyticExample& ex) {
  switch (ex.kind) {
    case ExampleKind::Function:
      throw std::invalid_argument("example " + ex.name + " is an explicit function, not a field");
    case ExampleKind::Ode: {
      FieldSpec spec;
      spec.rhs = ex.definition;
      spec.params = ex.params;
      spec.id = ex.name;
      return ScalarField(std::move(spec));
    }
    case ExampleKind::Difference: {
      if (ex.definition == "mu*K*x/(K+(mu-1)*x)") {
        BevertonHoltParams p;
        p.mu = ex.params.at("mu");
        p.K_expr = ex.sequences.at(0).second;
        p.alpha = 9.0;
        p.beta = 11.0;
        return make_beverton_holt(p).field;
      }
      FieldSpec spec;
      spec.kind = TimeKind::Discrete;
      spec.rhs = ex.definition;
      spec.params = ex.params;
      for (const auto& [name, text] : ex.sequences) spec.sequences.push_back(Sequence::from_expression(name, text));
      spec.id = ex.name;
      return ScalarField(std::move(spec));
    }
  }
  throw std::logic_error("unreachable");
}

Trajectory simulate_example(const AnalyticExample& ex, double u0, double t1, const IntegratorConfig& config) {
  switch (ex.kind) {
    case ExampleKind::Function: return sample_function(ex.definition, ex.params, 0.0, t1, config.output_step);
    case ExampleKind::Ode: return integrate(example_field(ex), u0, 0.0, t1, config);
    case ExampleKind::Difference: return iterate(example_field(ex), u0, std::lround(t1));
  }
  throw std::logic_error("unreachable");
}

}  // namespace remrec
