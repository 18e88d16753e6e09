#include "crossdiff_cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "crossdiff/diagnostics.hpp"

namespace crossdiff::cli {

namespace {

using nlohmann::ordered_json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("output: cannot write " + path);
  return out;
}

ordered_json lp_to_json(const LpLedger& lp) {
  ordered_json j;
  ordered_json norms = ordered_json::object();
  for (const auto& [p, v] : lp.lp_norms) norms[format_double(p)] = v;
  j["lp_norms"] = std::move(norms);
  j["reciprocal_norm"] = lp.reciprocal_norm;
  ordered_json grads = ordered_json::object();
  for (const auto& [p, v] : lp.grad_seminorms) grads[format_double(p)] = v;
  j["grad_seminorms"] = std::move(grads);
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_snapshots_csv(const std::string& path, const Grid1D& grid,
                         const Trajectory& trajectory, const Potentials& pots,
                         const XiEvaluator& xi) {
  std::ofstream out = open_out(path);
  out << "t,x,rho1,rho2,sigma,r,omega,phi\n";
  for (const State& state : trajectory.snapshots) {
    const TransformedState ts = transform(state);
    const RatioFields rf = omega_phi(grid, state, pots, xi);
    const std::string t = format_double(state.t);
    for (int j = 0; j < grid.n; ++j) {
      out << t << ',' << format_double(grid.center(j)) << ','
          << format_double(state.rho1[j]) << ',' << format_double(state.rho2[j]) << ','
          << format_double(ts.sigma[j]) << ',' << format_double(ts.r[j]) << ','
          << format_double(rf.omega[j]) << ',' << format_double(rf.phi[j]) << '\n';
    }
  }
}

void write_diagnostics_jsonl(const std::string& path, const Trajectory& trajectory) {
  std::ofstream out = open_out(path);
  ordered_json schema;
  schema["schema"] = "diagnostics-record";
  schema["fields"] = {"t",           "mass1",         "mass2",      "tv_r",
                      "tv_phi",      "energy",        "dissipation", "lp_norms",
                      "reciprocal_norm", "grad_seminorms", "fisher",  "b_entries",
                      "b_hat",       "min_sigma",     "max_sigma",  "clip_counter",
                      "clamp_counter"};
  out << schema.dump() << '\n';
  for (const DiagnosticsRecord& rec : trajectory.records) {
    ordered_json j;
    j["t"] = rec.t;
    j["mass1"] = rec.mass1;
    j["mass2"] = rec.mass2;
    j["tv_r"] = rec.tv_r;
    j["tv_phi"] = rec.tv_phi;
    j["energy"] = rec.energy;
    j["dissipation"] = rec.dissipation;
    const ordered_json lp = lp_to_json(rec.lp);
    j["lp_norms"] = lp["lp_norms"];
    j["reciprocal_norm"] = lp["reciprocal_norm"];
    j["grad_seminorms"] = lp["grad_seminorms"];
    j["fisher"] = rec.fisher;
    ordered_json entries = ordered_json::object();
    for (const auto& [name, value] : rec.b.entries) entries[name] = value;
    j["b_entries"] = std::move(entries);
    j["b_hat"] = rec.b.b_hat;
    j["min_sigma"] = rec.min_sigma;
    j["max_sigma"] = rec.max_sigma;
    j["clip_counter"] = rec.clip_counter;
    j["clamp_counter"] = rec.clamp_counter;
    out << j.dump() << '\n';
  }
}

void write_residual_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream out = open_out(path);
  out << "eta,n,mode,residual\n";
  for (const SweepRow& row : rows) {
    out << format_double(row.eta) << ',' << row.n << ',' << row.mode << ','
        << format_double(row.residual) << '\n';
  }
}

void write_cauchy_csv(const std::string& path, const std::vector<CauchyRow>& rows) {
  std::ofstream out = open_out(path);
  out << "eta_coarse,n_coarse,eta_fine,n_fine,species,l1_distance\n";
  for (const CauchyRow& row : rows) {
    out << format_double(row.eta_coarse) << ',' << row.n_coarse << ','
        << format_double(row.eta_fine) << ',' << row.n_fine << ',' << row.species << ','
        << format_double(row.distance) << '\n';
  }
}

std::vector<InvariantCheck> run_invariants(const Grid1D& grid,
                                           const Trajectory& trajectory,
                                           bool energy_tracked) {
  std::vector<InvariantCheck> checks;
  const auto& recs = trajectory.records;
  if (recs.empty()) {
    checks.push_back({"diagnostics-present", false, 0.0, 1.0});
    return checks;
  }

  double drift1 = 0.0, drift2 = 0.0;
  for (const DiagnosticsRecord& rec : recs) {
    drift1 = std::max(drift1, std::abs(rec.mass1 - recs.front().mass1));
    drift2 = std::max(drift2, std::abs(rec.mass2 - recs.front().mass2));
  }
  checks.push_back({"mass-conservation-species1", drift1 < 1e-10, drift1, 1e-10});
  checks.push_back({"mass-conservation-species2", drift2 < 1e-10, drift2, 1e-10});

  double min_sigma = recs.front().min_sigma;
  for (const DiagnosticsRecord& rec : recs) min_sigma = std::min(min_sigma, rec.min_sigma);
  checks.push_back({"aggregate-positivity", min_sigma > 0.0, min_sigma, 0.0});

  checks.push_back({"clipped-mass-per-step", trajectory.max_clipped_mass <= 1e-10,
                    trajectory.max_clipped_mass, 1e-10});

  if (energy_tracked && recs.size() >= 2) {
    // forward Euler trades exact descent for a consistency-order slack
    double worst_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < recs.size(); ++k) {
      const double dt = recs[k + 1].t - recs[k].t;
      const double slack = 10.0 * dt * (grid.dx + trajectory.max_dt);
      worst_excess = std::max(worst_excess, recs[k + 1].energy - recs[k].energy - slack);
    }
    checks.push_back({"free-energy-descent", worst_excess <= 0.0, worst_excess, 0.0});
  }
  return checks;
}

void write_summary_json(const std::string& path, const std::string& scenario,
                        const std::vector<InvariantCheck>& checks,
                        const Trajectory& trajectory) {
  ordered_json j;
  j["schema"] = "run-summary";
  j["scenario"] = scenario;
  bool all_pass = true;
  ordered_json list = ordered_json::array();
  for (const InvariantCheck& check : checks) {
    all_pass = all_pass && check.pass;
    ordered_json entry;
    entry["name"] = check.name;
    entry["pass"] = check.pass;
    entry["measured"] = check.measured;
    entry["bound"] = check.bound;
    list.push_back(std::move(entry));
  }
  j["checks"] = std::move(list);
  j["all_pass"] = all_pass;
  j["steps"] = trajectory.steps;
  j["total_clipped_cells"] = trajectory.total_clipped_cells;
  j["max_clipped_mass"] = trajectory.max_clipped_mass;
  j["max_dt"] = trajectory.max_dt;
  j["dissipation_time_integral"] = trajectory.dissipation_time_integral;
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace crossdiff::cli
