#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "remrec/catalog.hpp"
#include "remrec/classify.hpp"
#include "remrec/properties.hpp"
#include "remrec/trajectory.hpp"

namespace remrec::io {

using nlohmann::json;

struct Meta {
  std::string config_hash;
  std::string tool_version;
};

/// Shortest round-trip decimal, '.' separator regardless of locale.
std::string number(double v);

/// Quotes a CSV field when it holds a comma, quote or line break.
std::string csv_field(std::string_view s);

/// Every CSV starts with one '#' line carrying the metadata, then a header.
void write_csv_meta(std::ostream& os, const Meta& meta);

/// Columns t,value (one trajectory) or t,value_1..value_k (shared grid).
void write_trajectories_csv(std::ostream& os, const std::vector<Trajectory>& trajs, const Meta& meta);

/// Columns tau,window_start,window_end,sup.
void write_curves_csv(std::ostream& os, const std::vector<TailSupCurve>& curves, const Meta& meta);

/// Columns tau,admitted,L over the whole tau-grid plus any off-grid admissions.
void write_scan_csv(std::ostream& os, const AlmostPeriodSet& set, const Meta& meta);

/// {"config_hash", "tool_version", "payload"}.
void write_json(std::ostream& os, const json& payload, const Meta& meta);

json to_json(const Trajectory& traj);
json to_json(const PropertyReport& r);
json to_json(const TailSupCurve& c);
json to_json(const RemoteTest& r);
json to_json(const AlmostPeriodSet& s);
json to_json(const AsymptoticTest& a);
json to_json(const ClassificationReport& r);
json to_json(const SeparationReport& r);
json to_json(const AnalyticExample& ex);

/// Plain-text table of per-class verdicts with the resolution.
std::string table(const ClassificationReport& r);

}  // namespace remrec::io
