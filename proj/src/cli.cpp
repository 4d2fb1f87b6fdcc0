#include "tariff/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "tariff/analysis.hpp"
#include "tariff/iccp.hpp"
#include "tariff/oracle.hpp"
#include "tariff/pp.hpp"
#include "tariff/scenario.hpp"
#include "tariff/sp.hpp"

namespace tariff {

namespace {

using nlohmann::json;

struct CommonFlags {
  std::string scenario_path;
  std::string out_path;
  std::string format = "csv";
  double tolerance = kEpsilon;
  unsigned long long seed = 42;
};

void add_common(CLI::App* cmd, CommonFlags* flags, bool with_seed = false) {
  cmd->add_option("--scenario", flags->scenario_path, "scenario document (JSON)")
      ->required();
  cmd->add_option("--out", flags->out_path, "output path (default: stdout)");
  cmd->add_option("--format", flags->format, "csv or json-lines")
      ->check(CLI::IsMember({"csv", "json-lines"}));
  cmd->add_option("--tolerance", flags->tolerance, "threshold comparison tolerance")
      ->check(CLI::PositiveNumber);
  if (with_seed)
    cmd->add_option("--seed", flags->seed, "seed for the randomized checks");
}

void diag_error(std::ostream& diag, const std::string& kind, const std::string& message) {
  diag << json{{"record", "error"}, {"kind", kind}, {"message", message}}.dump() << "\n";
}

void emit_records(std::ostream& out, const std::string& format,
                  const std::vector<ResultRecord>& records) {
  if (format == "csv") {
    write_csv_header(out);
    for (const ResultRecord& r : records) write_csv_row(out, r);
  } else {
    for (const ResultRecord& r : records) out << record_to_json(r).dump() << "\n";
  }
}

ResultRecord cp_record(const Market& m, const CpSolution& cp, const SpSolution& sp) {
  ResultRecord r;
  r.scheme = "cp";
  r.supply = m.supply();
  r.j = m.size();
  r.revenue = cp.revenue;
  r.gain_vs_sp = sp.revenue > 0 ? (cp.revenue - sp.revenue) / sp.revenue : 0.0;
  r.k_eff = cp.k_eff;
  r.prices = cp.prices;
  r.allocations = cp.allocations;
  return r;
}

int cmd_solve(const CommonFlags& flags, const std::string& which, std::ostream& out) {
  const ScenarioFile scenario = load_scenario(flags.scenario_path);
  const Market m = scenario_market(scenario);
  const double eps = scenario.options.tolerance.value_or(flags.tolerance);
  const SpSolution sp = solve_sp(m, eps);
  std::vector<ResultRecord> records;

  if (which == "cp") {
    records.push_back(cp_record(m, solve_cp(m, eps), sp));
  } else if (which == "sp") {
    ResultRecord r;
    r.scheme = "sp";
    r.supply = m.supply();
    r.j = 1;
    r.revenue = sp.revenue;
    r.gain_vs_sp = 0;
    r.k_eff = sp.k_eff;
    r.prices.assign(m.size(), sp.price);
    r.allocations = sp.allocations;
    records.push_back(r);
  } else {
    if (!scenario.options.j)
      throw validation_error("scenario: options.j is required for solve-pp");
    const PpSolution pp = solve_pp(m, *scenario.options.j, eps);
    ResultRecord r;
    r.scheme = "pp";
    r.supply = m.supply();
    r.j = *scenario.options.j;
    r.revenue = pp.revenue;
    r.gain_vs_sp = sp.revenue > 0 ? (pp.revenue - sp.revenue) / sp.revenue : 0.0;
    r.k_eff = pp.k_eff;
    r.prices = pp.group_prices;
    r.allocations = pp.allocations;
    records.push_back(r);
  }
  emit_records(out, flags.format, records);
  return kExitOk;
}

int cmd_check_ic(const CommonFlags& flags, std::ostream& out) {
  const ScenarioFile scenario = load_scenario(flags.scenario_path);
  const Market m = scenario_market(scenario);
  const double eps = scenario.options.tolerance.value_or(flags.tolerance);
  const CpSolution cp = solve_cp(m, eps);
  const IcFeasibility fz = feasibility_thresholds(m, cp);
  out << json{{"record", "ic_feasibility"},
              {"feasible", fz.feasible},
              {"k_eff", cp.k_eff},
              {"t_thresholds", fz.t_thresholds},
              {"ratios", fz.ratios},
              {"margins", fz.margins},
              {"t_root", ic_t_root()}}
             .dump()
      << "\n";
  return fz.feasible ? kExitOk : kExitInfeasible;
}

int cmd_design_menu(const CommonFlags& flags, std::ostream& out) {
  const ScenarioFile scenario = load_scenario(flags.scenario_path);
  const Market m = scenario_market(scenario);
  const double eps = scenario.options.tolerance.value_or(flags.tolerance);
  const CpSolution cp = solve_cp(m, eps);
  const PriceMenu menu = build_menu(m, cp);
  const SelectionReport report = simulate_self_selection(menu, m, cp);

  for (std::size_t q = 0; q < menu.steps.size(); ++q) {
    json step{{"record", "menu_step"},
              {"step", q + 1},
              {"price", menu.steps[q].price},
              {"lower", menu.steps[q].lower}};
    if (std::isfinite(menu.steps[q].upper)) step["upper"] = menu.steps[q].upper;
    out << step.dump() << "\n";
  }
  for (std::size_t i = 0; i < report.choices.size(); ++i) {
    const GroupChoice& c = report.choices[i];
    out << json{{"record", "selection"},
                {"group", i + 1},
                {"theta", m.group(static_cast<int>(i)).theta},
                {"step", c.step + 1},
                {"quantity", c.quantity},
                {"surplus", c.surplus},
                {"intended_step", c.intended_step + 1},
                {"intended_quantity", c.intended_quantity}}
               .dump()
        << "\n";
  }
  out << json{{"record", "selection_summary"},
              {"compatible", report.compatible},
              {"revenue", report.revenue},
              {"cp_revenue", cp.revenue}}
             .dump()
      << "\n";
  return kExitOk;
}

int cmd_sweep(const CommonFlags& flags, std::ostream& out, std::ostream& diag) {
  const ScenarioFile scenario = load_scenario(flags.scenario_path);
  const Market m = scenario_market(scenario);
  const double eps = scenario.options.tolerance.value_or(flags.tolerance);
  const SweepSpec spec = scenario.options.sweep.value_or(SweepSpec{});

  std::vector<double> s_values;
  s_values.reserve(spec.steps);
  for (int i = 0; i < spec.steps; ++i)
    s_values.push_back(spec.s_min +
                       (spec.s_max - spec.s_min) * i / (spec.steps - 1));
  std::vector<int> j_set;
  for (int j = 1; j <= m.size(); ++j) j_set.push_back(j);

  const std::vector<GainCurve> curves = sweep_resource(m, s_values, j_set, eps);
  std::vector<ResultRecord> records;
  records.reserve(curves.size() * s_values.size());
  for (const GainCurve& c : curves) {
    for (const SweepSample& s : c.samples) {
      ResultRecord r;
      r.scheme = c.scheme;
      r.supply = s.supply;
      r.j = c.j;
      r.revenue = s.revenue;
      r.gain_vs_sp = s.gain_vs_sp;
      r.k_eff = s.k_eff;
      records.push_back(std::move(r));
    }
  }
  emit_records(out, flags.format, records);
  for (const GainCurve& c : curves) {
    for (double s : c.separation_points)
      diag << json{{"record", "separation"}, {"j", c.j}, {"s", s}}.dump() << "\n";
  }
  return kExitOk;
}

struct VerifyState {
  std::ostream& out;
  bool ok = true;
  void check(bool pass, const std::string& name, const std::string& detail = "") {
    out << (pass ? "ok " : "FAIL ") << name;
    if (!pass && !detail.empty()) out << ": " << detail;
    out << "\n";
    if (!pass) ok = false;
  }
};

void verify_market(VerifyState& v, const Market& m, const std::string& tag,
                   std::optional<int> j_opt, double eps) {
  if (m.supply() <= 0) {
    v.check(true, tag + " skipped (supply is zero)");
    return;
  }
  const CpSolution cp = solve_cp(m, eps);
  const SpSolution sp = solve_sp(m, eps);

  const double lam = brute_lambda_bisection(m);
  v.check(std::abs(cp.lambda_star - lam) <= 1e-8 * lam, tag + " multiplier-bisection",
          "algorithm " + format_sig(cp.lambda_star) + " vs bisection " + format_sig(lam));

  const BruteSpResult grid = brute_best_single_price(m, 100000);
  double n_eff = 0;
  for (int i = 0; i < sp.k_eff; ++i) n_eff += static_cast<double>(m.group(i).n);
  const double slack = n_eff * std::max(0.0, grid.price - sp.price) + 1e-9;
  v.check(grid.revenue <= sp.revenue + 1e-9 * std::max(1.0, sp.revenue) &&
              sp.revenue - grid.revenue <= slack,
          tag + " single-price-grid",
          "grid " + format_sig(grid.revenue) + " vs solver " + format_sig(sp.revenue));

  const CpDecomposition d = cp_revenue_decomposition(m, cp);
  v.check(std::abs(d.revenue - cp.revenue) <= 1e-9 * std::max(1.0, cp.revenue),
          tag + " revenue-decomposition",
          "rebuilt " + format_sig(d.revenue) + " vs solver " + format_sig(cp.revenue));

  if (m.size() <= 6) {
    const int j_max = std::min(3, m.size());
    for (int j = j_opt ? *j_opt : 1; j <= (j_opt ? *j_opt : j_max); ++j) {
      const PpSolution pp = solve_pp(m, j, eps);
      const PpExhaustive ex = brute_pp_exhaustive(m, j);
      const bool match =
          std::abs(pp.revenue - ex.revenue) <= 1e-8 * std::max(1.0, ex.revenue);
      const bool shape = ex.best_other <= ex.best_consecutive_prefix +
                                              1e-12 * std::max(1.0, ex.revenue);
      v.check(match && shape, tag + " partial-exhaustive j=" + std::to_string(j),
              "solver " + format_sig(pp.revenue) + " vs oracle " + format_sig(ex.revenue));
    }
  }

  if (cp.k_eff >= 1) {
    const IcFeasibility fz = feasibility_thresholds(m, cp);
    if (fz.feasible) {
      const PriceMenu menu = build_menu(m, cp);
      const SelectionReport rep = simulate_self_selection(menu, m, cp);
      bool grid_ok = true;
      const double s_top = cp.allocations.empty() ? 1.0 : cp.allocations[0];
      for (int i = 0; i < m.size(); ++i) {
        const BruteResponse br =
            brute_user_best_response(menu, m.group(i).theta, 2 * s_top + 1, 200000);
        const double grid_step = (2 * s_top + 1) / 200000;
        if (std::abs(br.quantity - rep.choices[i].quantity) > 2 * grid_step)
          grid_ok = false;
      }
      v.check(rep.compatible &&
                  std::abs(rep.revenue - cp.revenue) <= 1e-8 * std::max(1.0, cp.revenue) &&
                  grid_ok,
              tag + " menu-self-selection",
              "menu revenue " + format_sig(rep.revenue) + " vs " + format_sig(cp.revenue));
    } else {
      v.check(true, tag + " menu-self-selection skipped (incentive condition fails)");
    }
  }
}

int cmd_verify(const CommonFlags& flags, std::ostream& out) {
  const ScenarioFile scenario = load_scenario(flags.scenario_path);
  const Market m = scenario_market(scenario);
  const double eps = scenario.options.tolerance.value_or(flags.tolerance);

  VerifyState v{out};
  verify_market(v, m, "scenario", scenario.options.j, eps);
  std::mt19937_64 rng(flags.seed);
  for (int i = 0; i < 25; ++i) {
    const Market r = random_market(rng);
    verify_market(v, r, "random[" + std::to_string(i) + "]", std::nullopt, eps);
  }
  out << (v.ok ? "all checks passed\n" : "oracle mismatch detected\n");
  return v.ok ? kExitOk : kExitMismatch;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& diag) {
  CLI::App app{"usage-based tariff design for a shared resource"};
  app.require_subcommand(1);

  CommonFlags flags;
  CLI::App* solve_cp_cmd = app.add_subcommand("solve-cp", "complete differentiation");
  CLI::App* solve_sp_cmd = app.add_subcommand("solve-sp", "single price");
  CLI::App* solve_pp_cmd = app.add_subcommand("solve-pp", "partial differentiation");
  CLI::App* menu_cmd = app.add_subcommand("design-menu", "incentive-compatible menu");
  CLI::App* ic_cmd = app.add_subcommand("check-ic", "incentive feasibility report");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "supply sweep over all schemes");
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the oracle differential suite");
  for (CLI::App* cmd : {solve_cp_cmd, solve_sp_cmd, solve_pp_cmd, menu_cmd, ic_cmd, sweep_cmd})
    add_common(cmd, &flags);
  add_common(verify_cmd, &flags, /*with_seed=*/true);

  std::vector<const char*> argv;
  argv.push_back("tariff_cli");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    diag_error(diag, "usage", e.what());
    return kExitSchema;
  }

  std::ofstream file_out;
  std::ostream* sink = &out;
  if (!flags.out_path.empty()) {
    file_out.open(flags.out_path);
    if (!file_out) {
      diag_error(diag, "io", "cannot open output path " + flags.out_path);
      return kExitSchema;
    }
    sink = &file_out;
  }

  try {
    if (solve_cp_cmd->parsed()) return cmd_solve(flags, "cp", *sink);
    if (solve_sp_cmd->parsed()) return cmd_solve(flags, "sp", *sink);
    if (solve_pp_cmd->parsed()) return cmd_solve(flags, "pp", *sink);
    if (ic_cmd->parsed()) return cmd_check_ic(flags, *sink);
    if (menu_cmd->parsed()) return cmd_design_menu(flags, *sink);
    if (sweep_cmd->parsed()) return cmd_sweep(flags, *sink, diag);
    if (verify_cmd->parsed()) return cmd_verify(flags, *sink);
  } catch (const infeasible_error& e) {
    diag_error(diag, "infeasible", e.what());
    return kExitInfeasible;
  } catch (const validation_error& e) {
    diag_error(diag, "schema", e.what());
    return kExitSchema;
  } catch (const consistency_error& e) {
    diag_error(diag, "internal", e.what());
    return kExitMismatch;
  }
  diag_error(diag, "usage", "no subcommand selected");
  return kExitSchema;
}

}  // namespace tariff
