#pragma once

// Per-snapshot diagnostics for the viscous cross-diffusion runs: masses,
// total variation of the ratio fields, the free energy and its dissipation,
// Lebesgue/Sobolev ledgers of the aggregate, and a Gronwall monitor tying
// the growth of TV(phi) to the time integral of the ledger sum.

#include "crossdiff/grid.hpp"
#include "crossdiff/potentials.hpp"
#include "crossdiff/pressure.hpp"
#include "crossdiff/state.hpp"
#include "crossdiff/xi.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace crossdiff {

// sum_j |u_{j+1} - u_j|; zero iff the field is constant
double discrete_tv(const std::vector<double>& u);

// F = sum_j [ f(sigma_j) + eta*(rho1 log rho1 + rho2 log rho2)
//             + V1 rho1 + V2 rho2 ]_j dx, with 0*log 0 = 0
double energy_F(const Grid1D& grid, const State& state, const Potentials& pots,
                const PressureLaw& law, double eta);

// D = sum_i sum_j rho_{i,j} |dx( f'(sigma) + V_i + eta log rho_i )|_j^2 dx.
// Gradients are face differences (boundary faces carry zero, matching the
// no-flux scheme); face squares are averaged to cells. Logarithms clamp at
// kSFloor so vacuum cells contribute nothing instead of NaN.
double dissipation_D(const Grid1D& grid, const State& state, const Potentials& pots,
                     const PressureLaw& law, double eta);

struct LpLedger {
  std::map<double, double> lp_norms;        // p -> ||sigma^p||_1
  double reciprocal_norm = 0.0;             // ||sigma^-theta||_1
  std::map<double, double> grad_seminorms;  // p -> ||dx sigma^((p+alpha-1)/2)||_2^2;
                                            // the zero exponent switches to dx log sigma
};

// Aggregate integrability ledger at one snapshot. Requires sigma > 0.
LpLedger lp_ledger(const Grid1D& grid, const std::vector<double>& sigma,
                   const PressureLaw& law, const std::vector<double>& p_list,
                   double theta);

// sum_j sigma_j |dx f'(sigma)|_j^2 dx, same gradient convention as dissipation_D
double fisher_information(const Grid1D& grid, const std::vector<double>& sigma,
                          const PressureLaw& law);

struct BLedger {
  // named instantaneous norms whose time integrals drive the Gronwall bound;
  // order is fixed per law so emitted records line up across snapshots
  std::vector<std::pair<std::string, double>> entries;
  double b_hat = 0.0;  // unit-weight sum of the entries
};

// For laws with a power exponent: the full norm family in powers of sigma
// plus the eta-weighted members. For the logarithmic law the ledger reduces
// to the ||dx log sigma||^2 entry (the constant xi removes the rest).
BLedger b_ledger(const Grid1D& grid, const std::vector<double>& sigma,
                 const PressureLaw& law, double eta);

struct DiagnosticsConfig {
  std::vector<double> p_list{2.0, 3.0};  // exponents reported by lp_ledger
  double theta = 1.0;                    // reciprocal-norm exponent
};

struct DiagnosticsRecord {
  double t = 0.0;
  double mass1 = 0.0, mass2 = 0.0;
  double tv_r = 0.0, tv_phi = 0.0;
  double energy = 0.0;
  double dissipation = 0.0;
  LpLedger lp;
  double fisher = 0.0;
  BLedger b;
  double min_sigma = 0.0, max_sigma = 0.0;
  long long clip_counter = 0;   // cumulative cells clipped at zero up to t
  long long clamp_counter = 0;  // cumulative pressure floor clamps up to t
};

// Assembles the full record for one snapshot; law and eta come from the xi
// evaluator. The counters are passed through as provided by the run owner.
DiagnosticsRecord compute_record(const Grid1D& grid, const State& state,
                                 const Potentials& pots, const XiEvaluator& xi,
                                 const DiagnosticsConfig& cfg, long long clip_counter,
                                 long long clamp_counter);

struct GronwallReport {
  // smallest constant (floored at 1) with
  //   TV(phi(t1)) + 1 <= c_g * exp(int_{t0}^{t1} b_hat dt) * (TV(phi(t0)) + 1)
  // over every ordered pair of record times; b_hat integrates by trapezoid
  double c_g = 1.0;
  double b_hat_integral = 0.0;   // over the whole record span
  double max_tv_r_growth = 0.0;  // max_t [ tv_r(t) - tv_r(0) ]
};

// Requires at least two records.
GronwallReport gronwall_monitor(const std::vector<DiagnosticsRecord>& records);

}  // namespace crossdiff
