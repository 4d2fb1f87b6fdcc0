#include "tariff/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace tariff {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& path) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const auto& key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw validation_error("scenario: unknown key '" + item.key() + "' at " + path);
  }
}

double require_number(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key))
    throw validation_error("scenario: missing key '" + key + "' at " + path);
  const json& v = obj.at(key);
  if (!v.is_number())
    throw validation_error("scenario: '" + key + "' at " + path + " must be a number");
  return v.get<double>();
}

long long require_integer(const json& obj, const std::string& key,
                          const std::string& path) {
  if (!obj.contains(key))
    throw validation_error("scenario: missing key '" + key + "' at " + path);
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    throw validation_error("scenario: '" + key + "' at " + path + " must be an integer");
  return v.get<long long>();
}

}  // namespace

ScenarioFile parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw validation_error(std::string("scenario: malformed document: ") + e.what());
  }
  if (!doc.is_object()) throw validation_error("scenario: top level must be an object");
  reject_unknown_keys(doc, {"groups", "supply", "options"}, "$");

  ScenarioFile s;
  if (!doc.contains("groups") || !doc.at("groups").is_array())
    throw validation_error("scenario: 'groups' must be an array");
  if (doc.at("groups").empty())
    throw validation_error("scenario: 'groups' must not be empty");
  int idx = 0;
  for (const json& g : doc.at("groups")) {
    const std::string path = "$.groups[" + std::to_string(idx) + "]";
    if (!g.is_object()) throw validation_error("scenario: group at " + path + " must be an object");
    reject_unknown_keys(g, {"theta", "n"}, path);
    Group group;
    group.theta = require_number(g, "theta", path);
    group.n = require_integer(g, "n", path);
    if (group.theta <= 0)
      throw validation_error("scenario: theta at " + path + " must be positive");
    if (group.n < 1)
      throw validation_error("scenario: n at " + path + " must be at least 1");
    s.groups.push_back(group);
    ++idx;
  }
  s.supply = require_number(doc, "supply", "$");
  if (s.supply < 0) throw validation_error("scenario: 'supply' must be nonnegative");

  if (doc.contains("options")) {
    const json& opt = doc.at("options");
    if (!opt.is_object()) throw validation_error("scenario: 'options' must be an object");
    reject_unknown_keys(opt, {"j", "sweep", "tolerance"}, "$.options");
    if (opt.contains("j")) {
      const long long j = require_integer(opt, "j", "$.options");
      if (j < 1) throw validation_error("scenario: options.j must be at least 1");
      s.options.j = static_cast<int>(j);
    }
    if (opt.contains("sweep")) {
      const json& sw = opt.at("sweep");
      if (!sw.is_object()) throw validation_error("scenario: 'sweep' must be an object");
      reject_unknown_keys(sw, {"s_min", "s_max", "steps"}, "$.options.sweep");
      SweepSpec spec;
      spec.s_min = require_number(sw, "s_min", "$.options.sweep");
      spec.s_max = require_number(sw, "s_max", "$.options.sweep");
      spec.steps = static_cast<int>(require_integer(sw, "steps", "$.options.sweep"));
      if (spec.s_min < 0 || spec.s_max <= spec.s_min || spec.steps < 2)
        throw validation_error("scenario: sweep needs 0 <= s_min < s_max and steps >= 2");
      s.options.sweep = spec;
    }
    if (opt.contains("tolerance")) {
      const double tol = require_number(opt, "tolerance", "$.options");
      if (!(tol > 0) || tol >= 1)
        throw validation_error("scenario: tolerance must lie in (0, 1)");
      s.options.tolerance = tol;
    }
  }
  return s;
}

ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("scenario: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

Market scenario_market(const ScenarioFile& scenario) {
  return Market(std::vector<Group>(scenario.groups), scenario.supply);
}

std::string format_sig(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv_header(std::ostream& out) {
  out << "schema=1\n";
  out << "scheme,S,J,revenue,gain_vs_sp,k_eff\n";
}

void write_csv_row(std::ostream& out, const ResultRecord& r) {
  out << r.scheme << ',' << format_sig(r.supply) << ',' << r.j << ','
      << format_sig(r.revenue) << ',' << format_sig(r.gain_vs_sp) << ',' << r.k_eff
      << '\n';
}

nlohmann::json record_to_json(const ResultRecord& r) {
  return nlohmann::json{{"record", "result"},
                        {"scheme", r.scheme},
                        {"S", r.supply},
                        {"J", r.j},
                        {"revenue", r.revenue},
                        {"gain_vs_sp", r.gain_vs_sp},
                        {"k_eff", r.k_eff},
                        {"prices", r.prices},
                        {"allocations", r.allocations},
                        {"feasible", r.feasible}};
}

ResultRecord record_from_json(const nlohmann::json& j) {
  ResultRecord r;
  r.scheme = j.at("scheme").get<std::string>();
  r.supply = j.at("S").get<double>();
  r.j = j.at("J").get<int>();
  r.revenue = j.at("revenue").get<double>();
  r.gain_vs_sp = j.at("gain_vs_sp").get<double>();
  r.k_eff = j.at("k_eff").get<int>();
  r.prices = j.at("prices").get<std::vector<double>>();
  r.allocations = j.at("allocations").get<std::vector<double>>();
  r.feasible = j.at("feasible").get<bool>();
  return r;
}

}  // namespace tariff
