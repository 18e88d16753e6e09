#include "crossdiff_cli/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "crossdiff/initdata.hpp"
#include "crossdiff/potentials.hpp"
#include "crossdiff/pressure.hpp"
#include "crossdiff/solver.hpp"
#include "crossdiff/weakcheck.hpp"
#include "crossdiff/xi.hpp"
#include "crossdiff_cli/config.hpp"
#include "crossdiff_cli/output.hpp"

namespace crossdiff::cli {

namespace {

using nlohmann::ordered_json;

std::string sanitize(const std::string& name) {
  std::string out = name.empty() ? std::string("run") : name;
  for (char& ch : out) {
    const unsigned char u = static_cast<unsigned char>(ch);
    if (!std::isalnum(u) && ch != '-' && ch != '_' && ch != '.') ch = '_';
  }
  return out;
}

std::string artifact_base(const std::string& scenario_name) {
  return output_directory() + "/" + sanitize(scenario_name);
}

// the solver reads empty potentials as zero drift; artifact writers and weak
// residuals need the sampled representation on the right grid
Potentials effective_potentials(const Grid1D& grid, const RunConfig& cfg) {
  if (!cfg.pots.v1.empty()) return cfg.pots;
  return potentials_from_cells(grid, std::vector<double>(grid.n, 0.0),
                               std::vector<double>(grid.n, 0.0));
}

std::optional<Scenario> load_scenario(const std::string& config_path) {
  ParseResult parsed;
  try {
    parsed = parse_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return std::nullopt;
  }
  if (!parsed.ok()) {
    for (const ConfigViolation& v : parsed.violations)
      std::cerr << "config error: " << v.key << ": " << v.message << "\n";
    return std::nullopt;
  }
  return std::move(parsed.scenario);
}

// writes the full artifact set for one completed run and reports the
// invariant verdicts; returns true when every invariant passed
bool emit_run_artifacts(const std::string& base, const std::string& scenario_name,
                        const RunConfig& cfg, const Trajectory& trajectory) {
  const Potentials pots = effective_potentials(cfg.grid, cfg);
  const XiEvaluator xi(cfg.law, cfg.eta, cfg.quad_tol, cfg.tail_cutoff);
  write_snapshots_csv(base + "_snapshots.csv", cfg.grid, trajectory, pots, xi);
  write_diagnostics_jsonl(base + "_diagnostics.jsonl", trajectory);
  const std::vector<InvariantCheck> checks =
      run_invariants(cfg.grid, trajectory, cfg.track_dissipation);
  write_summary_json(base + "_summary.json", scenario_name, checks, trajectory);
  bool all_pass = true;
  for (const InvariantCheck& check : checks) {
    all_pass = all_pass && check.pass;
    std::cout << scenario_name << ": " << check.name << ": "
              << (check.pass ? "PASS" : "FAIL") << " (measured "
              << format_double(check.measured) << ", bound "
              << format_double(check.bound) << ")\n";
  }
  return all_pass;
}

std::string member_tag(double eta, int n) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "_eta%g_n%d", eta, n);
  return buf;
}

}  // namespace

std::string output_directory() {
  const char* env = std::getenv("CROSSDIFF_OUTPUT_DIR");
  const std::string dir = (env && *env) ? env : ".";
  std::filesystem::create_directories(dir);
  return dir;
}

int simulate_command(const std::string& config_path) {
  const std::optional<Scenario> scenario = load_scenario(config_path);
  if (!scenario) return 1;
  Trajectory trajectory;
  try {
    trajectory = run(scenario->config);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 2;
  }
  try {
    if (!emit_run_artifacts(artifact_base(scenario->name), scenario->name,
                            scenario->config, trajectory)) {
      std::cerr << "invariant violation: see " << sanitize(scenario->name)
                << "_summary.json\n";
      return 3;
    }
  } catch (const std::domain_error& e) {
    // the ratio-field writer rejects non-positive aggregates
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

int sweep_command(const std::string& config_path, const std::vector<double>& etas,
                  const std::vector<int>& grids, int mode_count) {
  bool lists_ok = true;
  if (etas.empty() || etas.size() != grids.size()) {
    std::cerr << "config error: sweep: etas and grids must be nonempty lists of "
                 "equal length, got "
              << etas.size() << " and " << grids.size() << "\n";
    lists_ok = false;
  }
  for (const double eta : etas) {
    if (!(eta > 0.0) || eta > 1.0 || !std::isfinite(eta)) {
      std::cerr << "config error: sweep: eta must lie in (0, 1], got " << eta << "\n";
      lists_ok = false;
    }
  }
  for (const int n : grids) {
    if (n < 16) {
      std::cerr << "config error: sweep: cell count must be at least 16, got " << n
                << "\n";
      lists_ok = false;
    }
  }
  if (mode_count < 0) {
    std::cerr << "config error: sweep: mode count must be nonnegative, got "
              << mode_count << "\n";
    lists_ok = false;
  }
  if (!lists_ok) return 1;

  const std::optional<Scenario> scenario = load_scenario(config_path);
  if (!scenario) return 1;

  struct Member {
    RunConfig config;
    Trajectory trajectory;
  };
  std::vector<RunConfig> configs(etas.size());
  for (std::size_t i = 0; i < etas.size(); ++i) {
    try {
      configs[i] = scenario->rebind(etas[i], grids[i]);
    } catch (const std::invalid_argument& e) {
      std::cerr << "config error: sweep member (eta " << etas[i] << ", n " << grids[i]
                << "): " << e.what() << "\n";
      return 1;
    }
  }

  // members are independent runs; compute them concurrently and do all file
  // writing afterwards on this thread so artifact bytes stay deterministic
  std::vector<std::future<Trajectory>> futures;
  futures.reserve(configs.size());
  for (const RunConfig& cfg : configs)
    futures.push_back(std::async(std::launch::async, [&cfg] { return run(cfg); }));

  std::vector<Member> members(configs.size());
  int exit_code = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    members[i].config = configs[i];
    try {
      members[i].trajectory = futures[i].get();
    } catch (const std::exception& e) {
      std::cerr << "solver failure: member (eta " << etas[i] << ", n " << grids[i]
                << "): " << e.what() << "\n";
      return 2;
    }
  }

  const std::string base = artifact_base(scenario->name);
  ordered_json member_list = ordered_json::array();
  for (std::size_t i = 0; i < members.size(); ++i) {
    const std::string tag = member_tag(etas[i], grids[i]);
    const bool pass = emit_run_artifacts(base + tag, scenario->name + tag,
                                         members[i].config, members[i].trajectory);
    if (!pass) exit_code = 3;
    ordered_json entry;
    entry["eta"] = etas[i];
    entry["n"] = grids[i];
    entry["steps"] = members[i].trajectory.steps;
    entry["invariants_pass"] = pass;
    member_list.push_back(std::move(entry));
  }

  // weak residuals per member across the test-function modes
  std::vector<SweepRow> rows;
  std::vector<double> max_residuals(members.size(), 0.0);
  for (std::size_t i = 0; i < members.size(); ++i) {
    const RunConfig& cfg = members[i].config;
    const Potentials pots = effective_potentials(cfg.grid, cfg);
    for (int mode = 0; mode <= mode_count; ++mode) {
      const TestFunction testfn =
          make_test_function(mode, cfg.t_final, cfg.grid.L, cfg.t_final);
      double residual = 0.0;
      for (int species : {1, 2}) {
        residual = std::max(residual,
                            weak_residual(cfg.grid, members[i].trajectory, pots,
                                          cfg.law, cfg.eta, testfn, species));
      }
      rows.push_back(SweepRow{etas[i], grids[i], mode, residual});
      max_residuals[i] = std::max(max_residuals[i], residual);
    }
  }
  write_residual_csv(base + "_residuals.csv", rows);

  bool residual_trend = true;
  for (std::size_t i = 0; i + 1 < max_residuals.size(); ++i)
    residual_trend = residual_trend && max_residuals[i + 1] < max_residuals[i];
  std::cout << "weak-residual trend: " << (residual_trend ? "PASS" : "FAIL")
            << " (member maxima";
  for (const double m : max_residuals) std::cout << ' ' << format_double(m);
  std::cout << ")\n";

  // space-time L1 distances between consecutive members, per species
  std::vector<CauchyRow> cauchy;
  for (std::size_t i = 0; i + 1 < members.size(); ++i) {
    for (int species : {1, 2}) {
      const double d = l1_cauchy_distance(members[i].config.grid, members[i].trajectory,
                                          members[i + 1].config.grid,
                                          members[i + 1].trajectory, species);
      cauchy.push_back(CauchyRow{etas[i], grids[i], etas[i + 1], grids[i + 1], species, d});
    }
  }
  write_cauchy_csv(base + "_cauchy.csv", cauchy);

  if (members.size() < 3) {
    std::cout << "cauchy trend: n/a (needs at least three members)\n";
  } else {
    bool cauchy_trend = true;
    for (int species : {1, 2}) {
      double prev = 0.0;
      bool first = true;
      for (const CauchyRow& row : cauchy) {
        if (row.species != species) continue;
        if (!first && row.distance >= prev) cauchy_trend = false;
        prev = row.distance;
        first = false;
      }
    }
    std::cout << "cauchy trend: " << (cauchy_trend ? "PASS" : "FAIL")
              << " (consecutive distances per species)\n";
  }

  ordered_json summary;
  summary["schema"] = "sweep-summary";
  summary["scenario"] = scenario->name;
  summary["members"] = std::move(member_list);
  summary["residual_trend_decreasing"] = residual_trend;
  summary["max_residuals"] = max_residuals;
  {
    ordered_json list = ordered_json::array();
    for (const CauchyRow& row : cauchy) {
      ordered_json entry;
      entry["eta_coarse"] = row.eta_coarse;
      entry["n_coarse"] = row.n_coarse;
      entry["eta_fine"] = row.eta_fine;
      entry["n_fine"] = row.n_fine;
      entry["species"] = row.species;
      entry["l1_distance"] = row.distance;
      list.push_back(std::move(entry));
    }
    summary["cauchy"] = std::move(list);
  }
  std::ofstream out(base + "_sweep_summary.json", std::ios::binary);
  out << summary.dump(2) << '\n';
  return exit_code;
}

int check_xi_command(const std::string& config_path) {
  const std::optional<Scenario> scenario = load_scenario(config_path);
  if (!scenario) return 1;
  const RunConfig& cfg = scenario->config;

  std::vector<double> ladder{0.0, 0.01, 0.1, 1.0};
  if (std::find(ladder.begin(), ladder.end(), cfg.eta) == ladder.end())
    ladder.push_back(cfg.eta);
  std::sort(ladder.begin(), ladder.end());

  constexpr int kSamples = 40;
  std::vector<double> samples(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    const double u = static_cast<double>(i) / (kSamples - 1);
    samples[i] = std::pow(10.0, -2.0 + 4.0 * u);  // log-spaced over [1e-2, 1e2]
  }

  const std::string base = artifact_base(scenario->name);
  std::ofstream battery(base + "_xi_battery.csv", std::ios::binary);
  battery << "eta,s,xi,xi_eta,ode_residual\n";

  bool all_pass = true;
  for (const double eta : ladder) {
    const XiEvaluator xi(cfg.law, eta, cfg.quad_tol, cfg.tail_cutoff);
    double worst_residual = 0.0;
    for (const double s : samples) {
      const double residual = xi.ode_residual(s);
      worst_residual = std::max(worst_residual, std::abs(residual));
      battery << format_double(eta) << ',' << format_double(s) << ','
              << format_double(xi.xi(s)) << ',' << format_double(xi.xi_eta(s)) << ','
              << format_double(residual) << '\n';
    }
    const XiBoundReport report = xi.verify_bounds(samples);
    const bool bounds_pass =
        report.all_ord_pass && (!report.power_family_applicable || report.all_power_pass);
    const bool residual_pass = worst_residual < 1e-5;
    all_pass = all_pass && bounds_pass && residual_pass;
    std::cout << "eta " << format_double(eta) << ": ode residual "
              << format_double(worst_residual) << " ("
              << (residual_pass ? "PASS" : "FAIL") << "), bounds "
              << (bounds_pass ? "PASS" : "FAIL") << "\n";
  }
  return all_pass ? 0 : 3;
}

int check_hypothesis_command(const std::string& config_path) {
  const std::optional<Scenario> scenario = load_scenario(config_path);
  if (!scenario) return 1;
  const RunConfig& cfg = scenario->config;

  std::vector<InvariantCheck> checks;

  {
    constexpr int kSamples = 60;
    std::vector<double> samples(kSamples);
    for (int i = 0; i < kSamples; ++i) {
      const double u = static_cast<double>(i) / (kSamples - 1);
      samples[i] = std::pow(10.0, -3.0 + 5.0 * u);
    }
    const HypothesisReport report = check_hypothesis(cfg.law, samples);
    const double worst = report.growth_applicable
                             ? std::min(report.worst_growth_margin,
                                        report.worst_logratio_margin)
                             : report.worst_logratio_margin;
    checks.push_back({"pressure-admissibility", report.all_pass, worst, 0.0});
  }

  checks.push_back({"viscosity-range", cfg.eta > 0.0 && cfg.eta <= 1.0, cfg.eta, 1.0});

  double mass_error = 0.0;
  for (int species : {1, 2}) {
    const std::vector<double>& rho = species == 1 ? cfg.init.rho1 : cfg.init.rho2;
    double mass = 0.0;
    for (const double v : rho) mass += v * cfg.grid.dx;
    mass_error = std::max(mass_error, std::abs(mass - 1.0));
  }
  checks.push_back({"initial-mass-normalization", mass_error <= 1e-12, mass_error, 1e-12});

  {
    const InitialData prepared =
        (cfg.mollify && cfg.init.provenance == Provenance::raw)
            ? mollify_initial(cfg.grid, cfg.init, cfg.eta, cfg.slow_mollify)
            : cfg.init;
    double min_sigma = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < prepared.rho1.size(); ++j)
      min_sigma = std::min(min_sigma, prepared.rho1[j] + prepared.rho2[j]);
    checks.push_back({"aggregate-positivity", min_sigma > 0.0, min_sigma, 0.0});
  }

  {
    const bool empty = cfg.pots.v1.empty();
    double worst_slope = 0.0;
    if (!empty) {
      worst_slope = std::max(
          std::max(std::abs(cfg.pots.dv1.front()), std::abs(cfg.pots.dv1.back())),
          std::max(std::abs(cfg.pots.dv2.front()), std::abs(cfg.pots.dv2.back())));
    }
    const bool pass = empty || cfg.pots.boundary_compatible;
    checks.push_back({"potential-boundary-compatibility", pass, worst_slope, 0.0});
  }

  {
    double worst = 0.0;
    bool finite = true;
    for (const std::vector<double>* field : {&cfg.pots.d2w, &cfg.pots.d3w}) {
      for (const double v : *field) {
        if (!std::isfinite(v)) finite = false;
        worst = std::max(worst, std::abs(v));
      }
    }
    checks.push_back({"potential-difference-regularity", finite, worst, 0.0});
  }

  bool all_pass = true;
  ordered_json list = ordered_json::array();
  for (const InvariantCheck& check : checks) {
    all_pass = all_pass && check.pass;
    std::cout << check.name << ": " << (check.pass ? "PASS" : "FAIL") << " (measured "
              << format_double(check.measured) << ")\n";
    ordered_json entry;
    entry["name"] = check.name;
    entry["pass"] = check.pass;
    entry["measured"] = check.measured;
    entry["bound"] = check.bound;
    list.push_back(std::move(entry));
  }
  ordered_json report;
  report["schema"] = "hypothesis-report";
  report["scenario"] = scenario->name;
  report["checks"] = std::move(list);
  report["all_pass"] = all_pass;
  std::ofstream out(artifact_base(scenario->name) + "_hypothesis.json",
                    std::ios::binary);
  out << report.dump(2) << '\n';
  return all_pass ? 0 : 3;
}

}  // namespace crossdiff::cli
