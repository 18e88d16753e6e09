#pragma once

// Plot-ready artifact writers. Every emitted file starts with a line that
// declares its schema, and numbers carry round-trip precision so identical
// runs produce identical bytes.

#include "crossdiff/grid.hpp"
#include "crossdiff/potentials.hpp"
#include "crossdiff/solver.hpp"
#include "crossdiff/weakcheck.hpp"
#include "crossdiff/xi.hpp"

#include <string>
#include <vector>

namespace crossdiff::cli {

// %.17g, enough digits to survive a parse round trip
std::string format_double(double v);

// columns t,x,rho1,rho2,sigma,r,omega,phi; one row per cell per snapshot
void write_snapshots_csv(const std::string& path, const Grid1D& grid,
                         const Trajectory& trajectory, const Potentials& pots,
                         const XiEvaluator& xi);

// one JSON object per diagnostics record, preceded by a schema line
void write_diagnostics_jsonl(const std::string& path, const Trajectory& trajectory);

// columns eta,n,mode,residual
void write_residual_csv(const std::string& path, const std::vector<SweepRow>& rows);

struct CauchyRow {
  double eta_coarse = 0.0;
  int n_coarse = 0;
  double eta_fine = 0.0;
  int n_fine = 0;
  int species = 0;
  double distance = 0.0;
};

// columns eta_coarse,n_coarse,eta_fine,n_fine,species,l1_distance
void write_cauchy_csv(const std::string& path, const std::vector<CauchyRow>& rows);

struct InvariantCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
};

// Post-run invariant verdicts for one trajectory: per-species mass drift,
// aggregate positivity, per-step clipped mass, and (when the run tracked
// dissipation) free-energy descent between records up to the scheme slack.
std::vector<InvariantCheck> run_invariants(const Grid1D& grid,
                                           const Trajectory& trajectory,
                                           bool energy_tracked);

// machine-readable run verdict; all_pass mirrors the process exit status
void write_summary_json(const std::string& path, const std::string& scenario,
                        const std::vector<InvariantCheck>& checks,
                        const Trajectory& trajectory);

}  // namespace crossdiff::cli
