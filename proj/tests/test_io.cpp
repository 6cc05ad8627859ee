#include <sstream>
#include <string>

#include "doctest.h"
#include "remrec/hash.hpp"
#include "remrec/integrate.hpp"
#include "remrec/io.hpp"

using namespace remrec;

TEST_CASE("numbers are shortest round-trip text") {
  CHECK(io::number(0.1) == "0.1");
  CHECK(io::number(2.0) == "2");
  CHECK(std::stod(io::number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("csv quoting") {
  CHECK(io::csv_field("plain") == "plain");
  CHECK(io::csv_field("a,b") == "\"a,b\"");
  CHECK(io::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("trajectory csv: metadata line, header, CRLF") {
  const auto tr = sample_function("t", {}, 0.0, 1.0, 0.5);
  std::ostringstream os;
  io::write_trajectories_csv(os, {tr}, {"abc", "9.9"});
  CHECK(os.str() == "# config_hash=abc tool_version=9.9\r\nt,value\r\n0,0\r\n0.5,0.5\r\n1,1\r\n");
}

TEST_CASE("json envelope") {
  std::ostringstream os;
  io::write_json(os, io::json{{"k", 1}}, {"h", "v"});
  const auto j = io::json::parse(os.str());
  CHECK(j["config_hash"] == "h");
  CHECK(j["tool_version"] == "v");
  CHECK(j["payload"]["k"] == 1);
}

TEST_CASE("scan csv lists every grid shift") {
  const auto tr = sample_function("sin(t)", {}, 0.0, 100.0, 0.05);
  const auto set = almost_period_scan(tr, 0.05, ScanMode::Global, {0.0, 1.0, 0.25}, {});
  std::ostringstream os;
  io::write_scan_csv(os, set, {"h", "v"});
  std::istringstream in(os.str());
  std::string line;
  int rows = 0;
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line == "tau,admitted,L\r");
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 5);
}

TEST_CASE("report json carries every class") {
  const auto tr = sample_function("sin(t)", {}, 0.0, 2000.0, 0.01);
  ClassifyConfig c;
  c.range.hi = 10.0;
  const auto rep = classify_trajectory(tr, 0.05, c);
  const auto j = io::to_json(rep);
  for (const auto& n : class_names()) CHECK(j.dump().find(n) != std::string::npos);
  CHECK(io::table(rep).find("hierarchy") != std::string::npos);
}

TEST_CASE("config hash is stable FNV-1a") {
  CHECK(config_hash("") == "cbf29ce484222325");
  CHECK(config_hash("a") == "af63dc4c8601ec8c");
}
