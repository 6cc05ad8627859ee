#include "remrec/io.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "remrec/expr.hpp"

namespace remrec::io {

std::string number(double v) { return expr::format_number(v); }

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void write_csv_meta(std::ostream& os, const Meta& meta) {
  os << "# config_hash=" << meta.config_hash << " tool_version=" << meta.tool_version << "\r\n";
}

void write_trajectories_csv(std::ostream& os, const std::vector<Trajectory>& trajs, const Meta& meta) {
  if (trajs.empty()) throw std::invalid_argument("nothing to write");
  for (const auto& t : trajs)
    if (t.size() != trajs.front().size() || t.t0() != trajs.front().t0() || t.step() != trajs.front().step())
      throw std::invalid_argument("trajectories must share a grid");
  write_csv_meta(os, meta);
  os << "t";
  if (trajs.size() == 1) {
    os << ",value";
  } else {
    for (std::size_t i = 0; i < trajs.size(); ++i) os << ",value_" << i + 1;
  }
  os << "\r\n";
  const auto& ref = trajs.front();
  for (std::size_t k = 0; k < ref.size(); ++k) {
    os << number(ref.time(k));
    for (const auto& t : trajs) os << ',' << number(t.values()[k]);
    os << "\r\n";
  }
}

void write_curves_csv(std::ostream& os, const std::vector<TailSupCurve>& curves, const Meta& meta) {
  write_csv_meta(os, meta);
  os << "tau,window_start,window_end,sup\r\n";
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.sups.size(); ++i)
      os << number(c.tau) << ',' << number(c.windows[i].start) << ',' << number(c.windows[i].end) << ','
         << number(c.sups[i]) << "\r\n";
}

void write_scan_csv(std::ostream& os, const AlmostPeriodSet& set, const Meta& meta) {
  write_csv_meta(os, meta);
  os << "tau,admitted,L\r\n";
  const auto& a = set.admitted;
  std::size_t j = 0;
  const double tol = 1e-9 * set.range.step;
  auto emit_admitted = [&](const AdmittedTau& x) {
    os << number(x.tau) << ",1," << (x.L ? number(*x.L) : std::string()) << "\r\n";
  };
  for (std::size_t i = 0; i < set.range.count(); ++i) {
    const double tau = set.range.at(i);
    while (j < a.size() && a[j].tau < tau - tol) emit_admitted(a[j++]);
    if (j < a.size() && std::fabs(a[j].tau - tau) <= tol) {
      emit_admitted(a[j++]);
    } else {
      os << number(tau) << ",0,\r\n";
    }
  }
  while (j < a.size()) emit_admitted(a[j++]);
}

void write_json(std::ostream& os, const json& payload, const Meta& meta) {
  json doc = {{"config_hash", meta.config_hash}, {"tool_version", meta.tool_version}, {"payload", payload}};
  os << doc.dump(2) << '\n';
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json witness(const std::optional<Witness>& w) {
  if (!w) return nullptr;
  return {{"t", w->t}, {"a", w->a}, {"b", w->b}};
}

}  // namespace

json to_json(const Trajectory& traj) {
  const auto& p = traj.provenance();
  return {{"kind", to_string(traj.kind())},
          {"t0", traj.t0()},
          {"step", traj.step()},
          {"provenance", {{"field", p.field_id}, {"u0", p.u0}, {"config_hash", p.config_hash}}},
          {"error_budget", traj.error_budget()},
          {"values", traj.values()}};
}

json to_json(const PropertyReport& r) {
  return {{"property", r.property}, {"verdict", to_string(r.verdict)}, {"witness", witness(r.witness)},
          {"extreme", r.extreme},   {"tolerance", r.tolerance},        {"samples", r.samples},
          {"note", r.note}};
}

json to_json(const TailSupCurve& c) {
  json windows = json::array();
  for (std::size_t i = 0; i < c.windows.size(); ++i)
    windows.push_back({{"start", c.windows[i].start}, {"end", c.windows[i].end}, {"sup", c.sups[i]},
                       {"at", c.where[i]}});
  return {{"tau", c.tau}, {"epsilon", c.epsilon}, {"noise_floor", c.noise_floor}, {"windows", windows}};
}

json to_json(const RemoteTest& r) {
  return {{"curve", to_json(r.curve)}, {"verdict", to_string(r.verdict)}, {"L", optional_number(r.L)},
          {"note", r.note}};
}

json to_json(const AlmostPeriodSet& s) {
  json admitted = json::array();
  for (const auto& a : s.admitted) admitted.push_back({{"tau", a.tau}, {"L", optional_number(a.L)}});
  return {{"epsilon", s.epsilon},
          {"mode", to_string(s.mode)},
          {"tau_range", {{"lo", s.range.lo}, {"hi", s.range.hi}, {"step", s.range.step}}},
          {"admitted", admitted},
          {"density",
           {{"window", s.density.window},
            {"largest_gap", s.density.largest_gap},
            {"l_min", std::isfinite(s.density.l_min) ? json(s.density.l_min) : json(nullptr)},
            {"verdict", to_string(s.density.verdict)}}}};
}

json to_json(const AsymptoticTest& a) {
  return {{"tau", a.tau}, {"samples", a.values.size()}, {"spread", a.spread}, {"verdict", to_string(a.verdict)}};
}

json to_json(const ClassificationReport& r) {
  json classes = json::array();
  for (const auto& c : r.classes) classes.push_back({{"class", c.name}, {"verdict", to_string(c.verdict)}, {"note", c.note}});
  json witnesses = json::object();
  if (r.global_scan) witnesses["global_scan"] = to_json(*r.global_scan);
  if (r.remote_scan) witnesses["remote_scan"] = to_json(*r.remote_scan);
  if (r.tau_test) witnesses["tau_test"] = to_json(*r.tau_test);
  if (r.stationary_probes) {
    json probes = json::array();
    for (const auto& t : r.stationary_probes->tests) probes.push_back(to_json(t));
    witnesses["stationary_probes"] = probes;
  }
  if (r.asymptotic) witnesses["asymptotic"] = to_json(*r.asymptotic);
  return {{"resolution",
           {{"epsilon", r.resolution.epsilon},
            {"horizon", r.resolution.horizon},
            {"delta", r.resolution.delta},
            {"tau_max", r.resolution.tau_max},
            {"tau_step", r.resolution.tau_step}}},
          {"tau", r.tau},
          {"tau_source", r.tau_source},
          {"probes", r.probes},
          {"classes", classes},
          {"hierarchy_consistent", r.hierarchy_consistent},
          {"violations", r.violations},
          {"inconclusive", r.inconclusive},
          {"witnesses", witnesses}};
}

json to_json(const SeparationReport& r) {
  return {{"u1", r.u1},       {"u2", r.u2},       {"tail", {r.tail.start, r.tail.end}},
          {"C", r.C},         {"drift", r.drift}, {"tolerance", r.tolerance},
          {"verdict", to_string(r.verdict)}};
}

json to_json(const AnalyticExample& ex) {
  json j = {{"name", ex.name},
            {"kind", to_string(ex.kind)},
            {"definition", ex.definition},
            {"params", ex.params},
            {"oracle", ex.oracle ? json(*ex.oracle) : json(nullptr)},
            {"bound", ex.bound ? json(*ex.bound) : json(nullptr)},
            {"expected", ex.expected},
            {"notes", ex.notes},
            {"resolution",
             {{"epsilon", ex.resolution.epsilon},
              {"horizon", ex.resolution.horizon},
              {"u0", ex.resolution.u0},
              {"probes", ex.resolution.probes}}}};
  json seq = json::object();
  for (const auto& [name, text] : ex.sequences) seq[name] = text;
  j["sequences"] = seq;
  return j;
}

std::string table(const ClassificationReport& r) {
  std::ostringstream os;
  os << "resolution: eps=" << number(r.resolution.epsilon) << " horizon=" << number(r.resolution.horizon)
     << " delta=" << number(r.resolution.delta) << " tau_max=" << number(r.resolution.tau_max)
     << " tau_step=" << number(r.resolution.tau_step) << "\n";
  os << "tau=" << number(r.tau) << " (" << r.tau_source << ")\n";
  std::size_t width = 0;
  for (const auto& c : r.classes) width = std::max(width, c.name.size());
  for (const auto& c : r.classes) {
    os << "  " << c.name << std::string(width - c.name.size() + 2, ' ');
    std::string v = to_string(c.verdict);
    os << v << std::string(14 - std::min<std::size_t>(13, v.size()), ' ') << c.note << "\n";
  }
  os << "hierarchy: " << (r.hierarchy_consistent ? "consistent" : "VIOLATED") << "\n";
  for (const auto& v : r.violations) os << "  " << v << "\n";
  return os.str();
}

}  // namespace remrec::io
