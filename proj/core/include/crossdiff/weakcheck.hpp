#pragma once

// Weak-formulation verification for computed trajectories. A trajectory
// approximately satisfies, for every test function phi with phi(T, .) = 0 and
// flat boundary slope,
//
//   int rho_i(0) phi(0) dx + int int rho_i dt_phi dx dt
//     = int int rho_i dx(f'(sigma) + V_i) dx_phi dx dt
//       - eta * int int rho_i dxx_phi dx dt,
//
// and the residual of that identity must shrink under joint (eta, n)
// refinement. The test class is phi(t, x) = psi(t) cos(k pi x / L) with psi a
// C1 cutoff vanishing at t_off, the practical spanning family for the
// limit-passage argument.

#include <functional>
#include <vector>

#include "crossdiff/grid.hpp"
#include "crossdiff/pressure.hpp"
#include "crossdiff/solver.hpp"

namespace crossdiff {

// phi(t, x) = psi(t) cos(mode * pi * x / length) with
// psi(t) = max(0, 1 - t/t_off)^2: smooth on the support, C1 at the cutoff,
// psi' piecewise linear so trapezoid time quadrature integrates it exactly.
struct TestFunction {
  int mode = 0;
  double t_off = 0.0;    // support end, in (0, horizon]
  double length = 0.0;   // domain length L
  double horizon = 0.0;  // trajectory final time T; phi(T, .) = 0

  double psi(double t) const;
  double dpsi(double t) const;
  double phi(double t, double x) const;
  double dphi_dt(double t, double x) const;
  double dphi_dx(double t, double x) const;
  double dphi_dxx(double t, double x) const;
};

// Validates mode >= 0, 0 < t_off <= horizon, length > 0.
TestFunction make_test_function(int mode, double t_off, double length,
                                double horizon);

// Residual of the weak identity for one species (1 or 2): midpoint quadrature
// in space, trapezoid in time over the snapshots, normalized by the largest
// of the three integral magnitudes (floored at one so exactly-cancelling
// integrals report the raw defect). The potentials and law must be the ones
// the trajectory was computed with. Throws std::invalid_argument for a bad
// species index or fewer than 8 snapshots.
double weak_residual(const Grid1D& grid, const Trajectory& trajectory,
                     const Potentials& pots, const PressureLaw& law, double eta,
                     const TestFunction& testfn, int species);

struct SweepRow {
  double eta = 0.0;
  int n = 0;
  int mode = 0;
  double residual = 0.0;  // max over the two species
};

struct SweepTable {
  std::vector<SweepRow> rows;          // one per (eta, n) pair and mode
  std::vector<double> max_residuals;   // per (eta, n) pair, max over modes
  bool monotone_decreasing = false;    // strictly, along the pair sequence
};

// Runs make_config(eta[i], n[i]) for each pair and evaluates weak residuals
// for modes 0..mode_count inclusive (full-support test functions). The lists
// must be nonempty and of equal length; mode_count must be >= 0. A
// one-element sweep is vacuously monotone.
SweepTable residual_sweep(const std::function<RunConfig(double, int)>& make_config,
                          const std::vector<double>& etas,
                          const std::vector<int>& ns, int mode_count);

// Space-time L1 distance between two trajectories of one species, after
// piecewise-linear interpolation of the coarse states onto the fine cell
// centers (edge-clamped). Snapshot counts and times must agree.
double l1_cauchy_distance(const Grid1D& coarse_grid, const Trajectory& coarse,
                          const Grid1D& fine_grid, const Trajectory& fine,
                          int species);

// L1 norm of the aggregate pressure gradient via dx g(sigma) =
// sigma * dx f'(sigma): sum over interior faces of the face-mean sigma times
// the face difference quotient of f'.
double grad_g_l1(const Grid1D& grid, const State& state, const PressureLaw& law);

}  // namespace crossdiff
