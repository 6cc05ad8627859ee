#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "remrec/classify.hpp"
#include "remrec/expr.hpp"
#include "remrec/field.hpp"
#include "remrec/integrate.hpp"
#include "remrec/trajectory.hpp"

namespace remrec {

enum class ExampleKind { Function, Ode, Difference };
const char* to_string(ExampleKind k);

/// Resolution at which an example's expected classification is claimed.
struct DeclaredResolution {
  double epsilon = 0.05;
  double horizon = 1e4;
  double u0 = 0.0;
  std::vector<double> probes;  ///< empty: default probes
};

struct AnalyticExample {
  std::string name;
  ExampleKind kind = ExampleKind::Function;
  std::string definition;  ///< phi(t), or the right-hand side f(t, x)
  expr::ParamMap params;
  std::vector<std::pair<std::string, std::string>> sequences;  ///< name, expression in n
  std::optional<std::string> oracle;  ///< closed form in t (and x0)
  std::optional<std::string> bound;   ///< upper bound on |phi(t+tau)-phi(t)|, in t and tau
  std::string expected;
  std::string notes;
  DeclaredResolution resolution;
};

const std::vector<AnalyticExample>& catalog();

/// Throws std::out_of_range naming the known examples.
const AnalyticExample& find_example(std::string_view name);

/// Closed-form value; `params` may bind x0 (default 0).
double oracle_value(const AnalyticExample& ex, double t, const expr::ParamMap& params = {});

/// Upper bound on |phi(t+tau) - phi(t)| for t > 0.
double tail_bound(const AnalyticExample& ex, double t, double tau);

/// (t_k^1, t_k^2) at which the exAAP1 solution equals x0 and x0 + 1.
std::pair<double, double> nonasymptotic_witnesses(int k);

struct BevertonHoltParams {
  double mu = 2.0;
  std::optional<double> K;             ///< constant capacity
  std::string K_expr;                  ///< expression in n, used when set
  std::vector<double> K_list;          ///< periodic list, used when set
  std::optional<double> alpha;
  std::optional<double> beta;
  long sample_count = 100000;          ///< n = 0 .. sample_count-1 checked against [alpha, beta]
};

struct BevertonHolt {
  ScalarField field;
  double mu = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  bool c3 = false;              ///< mu beta^2 / alpha^2 <= 1
  bool mu_above_one = false;
  double lipschitz_bound = 0.0; ///< mu beta^2 / alpha^2
  std::optional<double> limsup_bound;  ///< mu beta / (mu - 1) when mu > 1
  std::string report() const;
};

/// f(n, x) = mu K_n x / (K_n + (mu-1) x) on x >= 0.
BevertonHolt make_beverton_holt(const BevertonHoltParams& params);

/// Parses "mu=2,K=10", "K=10+sin(ln(1+n))", "K=list:9;11", "alpha=9,beta=11".
BevertonHoltParams parse_beverton_holt(std::string_view text);

/// The field of an ODE or difference example; throws for function examples.
ScalarField example_field(const AnalyticExample& ex);

/// Trajectory over [0, t1] from u0 (ignored for function examples).
Trajectory simulate_example(const AnalyticExample& ex, double u0, double t1,
                            const IntegratorConfig& config = {});

}  // namespace remrec
