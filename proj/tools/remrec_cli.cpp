// remrec: simulate scalar nonautonomous systems and classify their
// recurrence at a declared resolution.
//
// Exit codes: 0 ok, 1 verify failure, 2 configuration error,
// 3 integration aborted, 4 every class verdict inconclusive.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "remrec/catalog.hpp"
#include "remrec/classify.hpp"
#include "remrec/expr.hpp"
#include "remrec/hash.hpp"
#include "remrec/integrate.hpp"
#include "remrec/io.hpp"
#include "remrec/properties.hpp"
#include "remrec/verify.hpp"
#include "remrec/version.hpp"

using namespace remrec;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kIntegrationAbort = 3, kAllInconclusive = 4 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SystemOptions {
  std::string ode;
  std::string fn;
  std::string map;
  std::string example;
  std::string bh;
  std::vector<std::string> params;
};

struct IntegratorOptions {
  std::string method = "rkf45";
  double atol = 1e-10;
  double rtol = 1e-10;
  double max_step = 1.0;
  double dt = 0.0;  // 0: command default
};

struct OutputOptions {
  std::string out;
  std::string format = "csv";
};

void add_system(CLI::App* app, SystemOptions& s) {
  auto* ode = app->add_option("--ode", s.ode, "right-hand side f(t,x) of u' = f(t,u)");
  auto* fn = app->add_option("--fn", s.fn, "explicit function phi(t)");
  auto* map = app->add_option("--map", s.map, "map f(n,x) of u(n+1) = f(n,u(n))");
  auto* ex = app->add_option("--example", s.example, "catalog entry (see `remrec examples`)");
  auto* bh = app->add_option("--bh", s.bh, "Beverton-Holt, e.g. \"mu=2,K=10+sin(ln(1+n))\"");
  ode->excludes(fn)->excludes(map)->excludes(ex)->excludes(bh);
  fn->excludes(map)->excludes(ex)->excludes(bh);
  map->excludes(ex)->excludes(bh);
  ex->excludes(bh);
  app->add_option("--param", s.params, "parameter binding name=value (repeatable)");
}

void add_integrator(CLI::App* app, IntegratorOptions& o) {
  app->add_option("--method", o.method, "rk4 | rkf45")->capture_default_str();
  app->add_option("--atol", o.atol, "absolute tolerance")->capture_default_str();
  app->add_option("--rtol", o.rtol, "relative tolerance")->capture_default_str();
  app->add_option("--max-step", o.max_step, "largest internal step")->capture_default_str();
  app->add_option("--dt", o.dt, "output sampling step");
}

void add_output(CLI::App* app, OutputOptions& o) {
  app->add_option("--out", o.out, "output file (default: stdout)");
  app->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

expr::ParamMap parse_params(const std::vector<std::string>& items) {
  expr::ParamMap p;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects name=value, got '" + item + "'");
    const std::string value = item.substr(eq + 1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
      throw ConfigError("--param " + item.substr(0, eq) + ": not a number");
    p[item.substr(0, eq)] = v;
  }
  return p;
}

// What the user asked to run, resolved to something that produces a
// trajectory.
struct System {
  std::string id;
  TimeKind kind = TimeKind::Continuous;
  std::optional<ScalarField> field;
  std::string function;
  expr::ParamMap params;
  const AnalyticExample* example = nullptr;
  std::optional<BevertonHolt> bh;

  Trajectory run(double u0, double t1, const IntegratorConfig& cfg) const {
    if (!field) return sample_function(function, params, 0.0, t1, cfg.output_step);
    if (kind == TimeKind::Discrete) return iterate(*field, u0, std::lround(t1));
    return integrate(*field, u0, 0.0, t1, cfg);
  }

  std::vector<Trajectory> run_many(const std::vector<double>& u0s, double t1, const IntegratorConfig& cfg) const {
    std::vector<Trajectory> out;
    if (field && kind == TimeKind::Continuous) return integrate_many(*field, u0s, 0.0, t1, cfg);
    for (double u : u0s) out.push_back(run(u, t1, cfg));
    return out;
  }
};

System resolve(const SystemOptions& o) {
  System s;
  s.params = parse_params(o.params);
  if (!o.ode.empty()) {
    s.id = o.ode;
    s.field = ScalarField::ode(o.ode, s.params);
  } else if (!o.map.empty()) {
    s.id = o.map;
    s.kind = TimeKind::Discrete;
    s.field = ScalarField::map(o.map, s.params);
  } else if (!o.fn.empty()) {
    s.id = o.fn;
    s.function = o.fn;
    auto e = expr::parse(o.fn);
    if (e.uses_x()) throw ConfigError("--fn must not depend on x");
    e.bind(s.params);
  } else if (!o.example.empty()) {
    const auto& ex = find_example(o.example);
    s.id = ex.name;
    s.example = &ex;
    for (const auto& [k, v] : ex.params) s.params.emplace(k, v);
    if (ex.kind == ExampleKind::Function) {
      s.function = ex.definition;
    } else {
      s.field = example_field(ex);
      if (ex.kind == ExampleKind::Difference) s.kind = TimeKind::Discrete;
    }
  } else if (!o.bh.empty()) {
    s.id = "bh:" + o.bh;
    s.kind = TimeKind::Discrete;
    s.bh = make_beverton_holt(parse_beverton_holt(o.bh));
    s.field = s.bh->field;
  } else {
    throw ConfigError("no system given: use --ode, --fn, --map, --example or --bh");
  }
  return s;
}

IntegratorConfig integrator(const IntegratorOptions& o, double default_dt) {
  IntegratorConfig c;
  c.method = parse_method(o.method);
  c.abs_tol = o.atol;
  c.rel_tol = o.rtol;
  c.max_step = o.max_step;
  c.output_step = o.dt > 0.0 ? o.dt : default_dt;
  c.validate();
  return c;
}

std::pair<double, double> parse_span(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("--span expects a:b, got '" + text + "'");
  double a = 0.0;
  double b = 0.0;
  const std::string sa = text.substr(0, colon);
  const std::string sb = text.substr(colon + 1);
  auto ra = std::from_chars(sa.data(), sa.data() + sa.size(), a);
  auto rb = std::from_chars(sb.data(), sb.data() + sb.size(), b);
  if (ra.ec != std::errc() || rb.ec != std::errc() || ra.ptr != sa.data() + sa.size() ||
      rb.ptr != sb.data() + sb.size() || !(b > a))
    throw ConfigError("--span expects a:b with a < b, got '" + text + "'");
  return {a, b};
}

io::Meta meta_for(const CLI::App* sub) {
  return {config_hash(std::string(sub->get_name()) + "\n" + sub->config_to_str(true, false)), kToolVersion};
}

// Writes through `emit` to --out or stdout.
template <class Emit>
void deliver(const OutputOptions& o, Emit&& emit) {
  if (o.out.empty() || o.out == "-") {
    emit(std::cout);
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw ConfigError("cannot open --out file '" + o.out + "'");
  emit(f);
}

// Summary lines go to stdout only when the data went to a file.
std::ostream& summary_stream(const OutputOptions& o) {
  return (o.out.empty() || o.out == "-") ? std::cerr : std::cout;
}

double example_default(const System& s, double given, double declared, double fallback) {
  if (given > 0.0) return given;
  return s.example ? declared : fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recurrence classification for scalar nonautonomous systems", "remrec"};
  app.set_config("--config", "", "key=value file with [simulate]/[classify]/... sections; flags override it");
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  // simulate
  auto* sim = app.add_subcommand("simulate", "integrate or iterate a system and write the trajectory");
  SystemOptions sim_sys;
  IntegratorOptions sim_int;
  OutputOptions sim_out;
  std::vector<double> sim_u0;
  std::string sim_span;
  long sim_steps = 0;
  double sim_bound = kBlowUpGuard;
  add_system(sim, sim_sys);
  add_integrator(sim, sim_int);
  add_output(sim, sim_out);
  sim->add_option("--u0", sim_u0, "initial value(s)")->delimiter(',');
  sim->add_option("--span", sim_span, "time span a:b (ODEs and functions)");
  sim->add_option("--steps", sim_steps, "number of steps (maps)");
  sim->add_option("--bound", sim_bound, "bound for the boundedness verdict")->capture_default_str();

  // classify and scan share most options
  struct ClassifyOptions {
    SystemOptions sys;
    IntegratorOptions integ;
    OutputOptions out;
    double u0 = std::nan("");
    double eps = 0.0;
    double horizon = 0.0;
    std::optional<double> tau;
    double tau_max = 100.0;
    double tau_step = 0.0;
    double delta = 0.0;
    double density_window = 0.0;
    std::vector<double> probes;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 1;
    std::string mode = "global";
  };
  auto add_classify = [](CLI::App* sub, ClassifyOptions& c) {
    add_system(sub, c.sys);
    add_integrator(sub, c.integ);
    add_output(sub, c.out);
    sub->add_option("--u0", c.u0, "initial value");
    sub->add_option("--eps", c.eps, "resolution eps (default 0.05, or the example's)");
    sub->add_option("--horizon", c.horizon, "trajectory end time (default 1e4, or the example's)");
    sub->add_option("--tau-max", c.tau_max, "largest shift scanned")->capture_default_str();
    sub->add_option("--tau-step", c.tau_step, "shift grid step (default 0.01, or 1 for maps)");
    sub->add_option("--delta", c.delta, "supremum grid step (default: sampling step)");
    sub->add_option("--density-window", c.density_window, "l for the relative-density verdict (default: range/4)");
    sub->add_option("--seed", c.seed, "seed for random probes")->capture_default_str();
    sub->add_option("--threads", c.threads, "worker threads")->capture_default_str();
  };
  auto* cls = app.add_subcommand("classify", "place a trajectory in the recurrence hierarchy");
  ClassifyOptions cls_opt;
  add_classify(cls, cls_opt);
  cls->add_option("--tau", cls_opt.tau, "shift for the tau-classes (default: detected period)");
  cls->add_option("--probes", cls_opt.probes, "shifts for the remote-stationarity test")->delimiter(',');

  auto* scan = app.add_subcommand("scan", "scan shifts for eps-almost periods");
  ClassifyOptions scan_opt;
  add_classify(scan, scan_opt);
  scan->add_option("--mode", scan_opt.mode, "global | remote")->check(CLI::IsMember({"global", "remote"}))->capture_default_str();

  auto* ver = app.add_subcommand("verify", "run a self-contained check suite");
  std::string suite = "all";
  std::uint64_t ver_seed = kDefaultSeed;
  ver->add_option("suite", suite, "suite name or alias, or all")->capture_default_str();
  ver->add_option("--seed", ver_seed, "seed for random pairs")->capture_default_str();

  auto* exs = app.add_subcommand("examples", "list the example catalog");
  OutputOptions ex_out;
  ex_out.format = "text";
  exs->add_option("--format", ex_out.format, "text | json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (sim->parsed()) {
      const System s = resolve(sim_sys);
      const auto m = meta_for(sim);
      std::vector<double> u0 = sim_u0;
      if (u0.empty()) u0.push_back(s.example ? s.example->resolution.u0 : 0.0);
      double t1 = 0.0;
      if (s.kind == TimeKind::Discrete) {
        if (!sim_span.empty()) t1 = parse_span(sim_span).second;
        if (sim_steps > 0) t1 = static_cast<double>(sim_steps);
        if (!(t1 >= 1.0)) throw ConfigError("maps need --steps N (N >= 1)");
        if (!sim_span.empty() && parse_span(sim_span).first != 0.0) throw ConfigError("maps start at n = 0");
      } else {
        const auto [a, b] = sim_span.empty() ? std::pair{0.0, 100.0} : parse_span(sim_span);
        if (a != 0.0) throw ConfigError("--span must start at 0");
        t1 = b;
      }
      const auto cfg = integrator(sim_int, 0.01);
      const auto trajs = s.run_many(u0, t1, cfg);
      deliver(sim_out, [&](std::ostream& os) {
        if (sim_out.format == "json") {
          io::json payload = io::json::array();
          for (const auto& t : trajs) payload.push_back(io::to_json(t));
          io::write_json(os, {{"system", s.id}, {"u0", u0}, {"trajectories", payload}}, m);
        } else {
          io::write_trajectories_csv(os, trajs, m);
        }
      });
      auto& out = summary_stream(sim_out);
      for (std::size_t i = 0; i < trajs.size(); ++i) {
        const auto b = boundedness(trajs[i], sim_bound);
        out << "u0=" << io::number(u0[i]) << " samples=" << trajs[i].size() << " sup=" << io::number(b.extreme)
            << " bounded by " << io::number(sim_bound) << ": " << to_string(b.verdict) << "\n";
      }
      if (s.bh) out << s.bh->report();
      return kOk;
    }

    if (cls->parsed() || scan->parsed()) {
      const bool classify = cls->parsed();
      ClassifyOptions& o = classify ? cls_opt : scan_opt;
      CLI::App* sub = classify ? cls : scan;
      const System s = resolve(o.sys);
      const auto* ex = s.example;
      const double eps = example_default(s, o.eps, ex ? ex->resolution.epsilon : 0.0, 0.05);
      const double horizon = example_default(s, o.horizon, ex ? ex->resolution.horizon : 0.0, 1e4);
      const double u0 = std::isnan(o.u0) ? (ex ? ex->resolution.u0 : 0.0) : o.u0;
      if (!(eps > 0.0)) throw ConfigError("--eps must be positive");
      const auto cfg = integrator(o.integ, std::max(0.01, horizon / 1e6));
      const auto traj = s.run(u0, horizon, cfg);
      const auto m = meta_for(sub);

      ClassifyConfig cc;
      cc.range.hi = o.tau_max;
      cc.range.step = o.tau_step;
      cc.delta = o.delta;
      cc.density_window = o.density_window;
      cc.seed = o.seed;
      cc.threads = o.threads;
      if (classify) {
        cc.tau = o.tau;
        cc.probes = !o.probes.empty() ? o.probes : (ex ? ex->resolution.probes : std::vector<double>{});
        const auto rep = classify_trajectory(traj, eps, cc);
        std::cout << "system " << s.id << " u0=" << io::number(u0) << "\n" << io::table(rep);
        if (!o.out.out.empty()) {
          deliver(o.out, [&](std::ostream& os) {
            if (o.out.format == "json") {
              io::write_json(os, {{"system", s.id}, {"u0", u0}, {"report", io::to_json(rep)}}, m);
            } else {
              std::vector<TailSupCurve> curves;
              if (rep.tau_test) curves.push_back(rep.tau_test->curve);
              if (rep.stationary_probes)
                for (const auto& t : rep.stationary_probes->tests) curves.push_back(t.curve);
              io::write_curves_csv(os, curves, m);
            }
          });
        }
        return rep.all_inconclusive() ? kAllInconclusive : kOk;
      }

      TauRange range{0.0, o.tau_max, o.tau_step > 0.0 ? o.tau_step : (s.kind == TimeKind::Discrete ? 1.0 : 0.01)};
      WindowSchedule schedule;
      const ScanMode mode = o.mode == "remote" ? ScanMode::Remote : ScanMode::Global;
      const double delta = o.delta > 0.0 ? o.delta : traj.step();
      if (mode == ScanMode::Remote) schedule = default_schedule(traj, range.hi);
      schedule.delta = delta;
      const auto set = almost_period_scan(traj, eps, mode, range, schedule, {o.density_window, o.threads});
      deliver(o.out, [&](std::ostream& os) {
        if (o.out.format == "json")
          io::write_json(os, {{"system", s.id}, {"u0", u0}, {"scan", io::to_json(set)}}, m);
        else
          io::write_scan_csv(os, set, m);
      });
      summary_stream(o.out) << to_string(mode) << " scan at eps=" << io::number(eps) << ": "
                            << set.admitted.size() << " admitted, largest gap " << io::number(set.density.largest_gap)
                            << ", l_min " << io::number(set.density.l_min) << " vs l "
                            << io::number(set.density.window) << ": " << to_string(set.density.verdict) << "\n";
      return kOk;
    }

    if (ver->parsed()) {
      bool ok = true;
      for (const auto& r : run_suite(suite, ver_seed)) {
        std::cout << "suite " << r.suite << "\n";
        for (const auto& c : r.checks)
          std::cout << "  " << (c.ok ? "PASS" : "FAIL") << "  " << c.property << (c.detail.empty() ? "" : " | ")
                    << c.detail << "\n";
        ok = ok && r.ok();
      }
      std::cout << (ok ? "all checks passed" : "some checks FAILED") << "\n";
      return ok ? kOk : kVerifyFailed;
    }

    if (exs->parsed()) {
      if (ex_out.format == "json") {
        io::json list = io::json::array();
        for (const auto& ex : catalog()) list.push_back(io::to_json(ex));
        io::write_json(std::cout, list, meta_for(exs));
        return kOk;
      }
      for (const auto& ex : catalog()) {
        std::cout << ex.name << "  [" << to_string(ex.kind) << "]\n"
                  << "  definition: " << ex.definition << "\n";
        for (const auto& [name, text] : ex.sequences) std::cout << "  " << name << "_n = " << text << "\n";
        if (ex.oracle) std::cout << "  closed form: " << *ex.oracle << "\n";
        if (ex.bound) std::cout << "  bound on |phi(t+tau)-phi(t)|: " << *ex.bound << "\n";
        std::cout << "  expected: " << ex.expected << " (eps=" << io::number(ex.resolution.epsilon)
                  << ", horizon=" << io::number(ex.resolution.horizon) << ")\n";
        if (!ex.notes.empty()) std::cout << "  note: " << ex.notes << "\n";
      }
      return kOk;
    }
  } catch (const IntegrationError& e) {
    std::cerr << "remrec: integration aborted: " << e.what() << "\n";
    return kIntegrationAbort;
  } catch (const std::exception& e) {
    std::cerr << "remrec: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}
