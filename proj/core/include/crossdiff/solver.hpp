#pragma once

// Conservative finite-volume stepping of the viscous two-species
// cross-diffusion system on (0, L):
//
//   d/dt rho_i = eta * dxx rho_i + dx( rho_i * dx( f'(rho1 + rho2) + V_i ) )
//
// with no-flux boundaries imposed strongly (boundary faces carry exactly
// zero flux). Fluxes are upwind in the drift velocity with central
// viscosity; time integration is forward Euler under a CFL bound. The
// transformed fields sigma = rho1 + rho2, r = rho1/sigma, and the
// drift-weighted ratio phi = r*omega/((1-r) + r*omega) are exposed alongside
// the stepping so diagnostics and tests share one definition.

#include "crossdiff/diagnostics.hpp"
#include "crossdiff/grid.hpp"
#include "crossdiff/initdata.hpp"
#include "crossdiff/potentials.hpp"
#include "crossdiff/pressure.hpp"
#include "crossdiff/state.hpp"
#include "crossdiff/xi.hpp"

#include <functional>
#include <vector>

namespace crossdiff {

struct TransformedState {
  std::vector<double> sigma;  // aggregate per cell
  std::vector<double> r;      // species-1 fraction; vacuum cells filled from neighbors
};

// sigma = rho1 + rho2 cellwise and r = build_ratio(rho1, rho2); the
// reconstruction rho1 = r*sigma, rho2 = (1-r)*sigma holds wherever sigma is
// above the vacuum threshold.
TransformedState transform(const State& state);

struct RatioFields {
  std::vector<double> omega;  // inhomogeneity weight; omega[0] == 1 exactly
  std::vector<double> phi;    // weighted ratio, in [0,1] cellwise
};

// omega_j = exp(-I_j) with I_j the cumulative trapezoid over cell centers of
// dx(V1 - V2) * xi_eta(sigma), started at zero in the first cell. Cells where
// omega == 1 take phi = r directly (the formula reduces to it), so identical
// potentials give phi == r bitwise. Throws std::domain_error if sigma <= 0
// anywhere.
RatioFields omega_phi(const Grid1D& grid, const State& state, const Potentials& pots,
                      const XiEvaluator& xi);

struct FaceFlux {
  std::vector<double> species1;  // n+1 faces; boundary entries exactly zero
  std::vector<double> species2;
};

// Interior face k between cells k-1 and k carries
//   F_i = -eta*(rho_i[k] - rho_i[k-1])/dx + upwind(rho_i) * u_i,
//   u_i = -(f'(sigma_k) - f'(sigma_{k-1}))/dx - dV_i[k],
// with the upwind cell chosen by the sign of u_i. All differences are taken
// directly so a uniform zero-drift state produces fluxes that are exactly
// zero. Throws std::runtime_error naming the cell if f' turns non-finite.
FaceFlux face_flux(const Grid1D& grid, const State& state, const Potentials& pots,
                   const PressureLaw& law, double eta);

// safety * min( dx^2 / (2*(eta + max_j sigma_j f''(sigma_j))),
//               dx / max_{i,k} |u_{i,k}| ),  with 1/0 read as infinity
double cfl_dt(const Grid1D& grid, const State& state, const Potentials& pots,
              const PressureLaw& law, double eta, double safety);

// Optional forcing evaluated at cell centers (manufactured-solution runs).
struct SourceTerm {
  std::function<double(double t, double x)> species1, species2;
};

// Clipped mass above this threshold in a single step is a scheme failure.
inline constexpr double kClipFailure = 1e-8;

struct StepResult {
  State state;
  long long clipped_cells = 0;  // cells clipped to zero this step
  double clipped_mass = 0.0;    // mass removed by clipping, restored by rescale
};

// One forward-Euler step rho <- rho - dt/dx*(F_{k+1} - F_k) (+ dt*source).
// Negative cells are clipped to zero and the surplus drained proportionally
// from the rest of the species, so the per-species mass telescopes exactly.
// Throws std::runtime_error (scheme failure) when the clipped mass exceeds
// kClipFailure.
StepResult step(const Grid1D& grid, const State& state, const Potentials& pots,
                const PressureLaw& law, double eta, double dt,
                const SourceTerm* source = nullptr);

struct RunConfig {
  Grid1D grid{16, 1.0};
  PressureLaw law = PressureLaw::logarithmic(1.0);
  double eta = 0.1;           // in (0, 1]; the inviscid limit is probed by sweeps only
  Potentials pots;            // prepared for the same grid; empty means V1 = V2 = 0
  InitialData init;           // raw or pre-mollified cell data
  bool mollify = true;        // mollify raw initial data before stepping
  bool slow_mollify = false;  // sqrt(eta) mollifier width instead of eta
  double t_final = 0.25;      // 0 is allowed: the trajectory holds the initial state only
  double cfl_safety = 0.4;    // in (0, 1)
  double output_every = 0.05;
  double quad_tol = 1e-10;    // xi evaluator settings
  double tail_cutoff = 60.0;
  // accumulate dissipation_D * dt every step; costs one extra diagnostics
  // pass per step, so long high-resolution runs may switch it off
  bool track_dissipation = true;
  DiagnosticsConfig diag;
};

struct Trajectory {
  std::vector<State> snapshots;            // t = 0, output_every, ..., t_final
  std::vector<DiagnosticsRecord> records;  // one per snapshot
  InitialData prepared;                    // the initial data actually stepped
  long long total_clipped_cells = 0;
  double max_clipped_mass = 0.0;  // largest single-step clipped mass
  double max_dt = 0.0;            // largest step taken (for slack budgets)
  long long steps = 0;
  // left-endpoint Riemann sum of dissipation_D along every step; records
  // alone undersample the initial transient, so the run owns this integral
  double dissipation_time_integral = 0.0;
};

// Advances to t_final with adaptive dt = cfl_dt capped to land exactly on
// the output times. Deterministic for a fixed config: fixed iteration order,
// no time-based seeds. Scheme failures propagate with the failing time.
Trajectory run(const RunConfig& config);

}  // namespace crossdiff
