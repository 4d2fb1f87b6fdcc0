#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tariff/market.hpp"

#include "json.hpp"

namespace tariff {

struct SweepSpec {
  double s_min = 0;
  double s_max = 50;
  int steps = 5001;
};

struct ScenarioOptions {
  std::optional<int> j;
  std::optional<SweepSpec> sweep;
  std::optional<double> tolerance;
};

// Input document: groups, supply, and solver options.  The schema is strict;
// unknown keys are rejected with their path.
struct ScenarioFile {
  std::vector<Group> groups;
  double supply = 0;
  ScenarioOptions options;
};

ScenarioFile parse_scenario(const std::string& text);
ScenarioFile load_scenario(const std::string& path);
Market scenario_market(const ScenarioFile& scenario);

// One solved scheme, as emitted by the CLI.
struct ResultRecord {
  std::string scheme;  // "cp", "sp", or "pp"
  double supply = 0;
  int j = 0;
  double revenue = 0;
  double gain_vs_sp = 0;
  int k_eff = 0;
  std::vector<double> prices;
  std::vector<double> allocations;
  bool feasible = true;  // incentive feasibility where relevant
};

// 12 significant digits, locale-independent.
std::string format_sig(double v);

// CSV form carries the scalar columns only (schema line + header + rows).
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const ResultRecord& r);

// JSON form round-trips losslessly, vectors included.
nlohmann::json record_to_json(const ResultRecord& r);
ResultRecord record_from_json(const nlohmann::json& j);

}  // namespace tariff
