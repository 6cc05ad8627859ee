#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "remrec/random.hpp"

namespace remrec {

struct CheckLine {
  std::string property;
  bool ok = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckLine> checks;
  bool ok() const;
};

struct SuiteInfo {
  std::string name;
  std::string alias;
  std::string summary;
};

/// Suites runnable by `verify`, in order.
const std::vector<SuiteInfo>& suites();

/// Runs one suite by name or alias ("all" runs every suite). Throws
/// std::out_of_range for an unknown name.
std::vector<SuiteResult> run_suite(std::string_view name, std::uint64_t seed = kDefaultSeed);

}  // namespace remrec
