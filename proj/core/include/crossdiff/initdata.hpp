#pragma once

#include <string>
#include <vector>

#include "crossdiff/grid.hpp"
#include "crossdiff/potentials.hpp"
#include "crossdiff/pressure.hpp"

namespace crossdiff {

// Cells whose total density does not exceed this threshold are vacuum for the
// purpose of the ratio field; the ratio there is copied from the nearest
// non-vacuum cell, the TV-minimal piecewise-constant fill.
inline constexpr double kVacuumEps = 1e-14;

enum class Provenance { raw, mollified };

// Per-cell initial densities, unit mass each (sum rho_i dx = 1), together with the
// ratio field r = rho1/(rho1+rho2) away from vacuum.
struct InitialData {
  std::vector<double> rho1, rho2, r;
  Provenance provenance = Provenance::raw;
  double eta = 0.0;    // smoothing parameter; 0 for raw data
  double width = 0.0;  // reset-collar width actually used (eta, or sqrt(eta) when slowed)
  double c1 = 1.0;     // recorded ratio-normalization divisor, >= 1 for mollified data
};

// r with r*(rho1+rho2) = rho1 wherever rho1+rho2 exceeds the vacuum threshold.
// Vacuum cells copy the nearest non-vacuum ratio, ties broken leftward; an
// all-vacuum input yields r = 1/2 everywhere.
std::vector<double> build_ratio(const std::vector<double>& rho1,
                                const std::vector<double>& rho2);

// Named presets sampled at cell centers, normalized to exact unit mass per species:
//   uniform          rho1 = rho2 = 1/L everywhere (totally mixed)
//   segregated_step  species 1 fills the left half, species 2 the right (r a single step)
//   mixed_gaussians  overlapping Gaussian bumps centered at 0.4 L and 0.6 L
//   partial_overlap  raised-cosine humps overlapping on the middle quarter of the domain
InitialData make_preset(const Grid1D& grid, const std::string& name);

// Linear interpolation of (x, rho1, rho2) samples to cell centers, edge-clamped
// outside the sampled range, then normalized to unit mass per species. The sample
// abscissae must be strictly increasing and the densities nonnegative.
InitialData from_samples(const Grid1D& grid, const std::vector<double>& x,
                         const std::vector<double>& rho1,
                         const std::vector<double>& rho2);

// The eta-indexed smoothing pipeline with collar width w = eta (sqrt(eta) when slow
// is set): raise sigma = rho1+rho2 to 1 on [0,3w] and [L-3w,L] and floor it at eta
// inside; zero the ratio on the same collars; convolve both with the cosine-bump
// kernel of width w; reset [0,w] and [L-w,L] to exactly (sigma, r) = (1, 0);
// normalize sigma to total mass 2; rescale the ratio so each species has unit mass
// (the complement 1-r is rescaled instead whenever the literal division would push
// r above 1; the recorded divisor c1 >= 1 either way). Densities are reassembled
// as rho1 = r sigma, rho2 = (1-r) sigma; the output sigma is strictly positive and
// constant near both boundaries.
InitialData mollify_initial(const Grid1D& grid, const InitialData& data, double eta,
                            bool slow = false);

// Boundary flux expressions evaluated at both boundary cells with one-sided
// second-order differences: the zero-order expression
//   eta dx(rho_i) + rho_i (dx f'(sigma) + dx V_i)
// and the first-order expression obtained by differentiating it in time along the
// system (with D_i the right-hand side of the species-i equation):
//   eta dx(D_i) + D_i (dx f'(sigma) + dx V_i) + rho_i dx(f''(sigma) (D_1 + D_2)).
// Smoothed data with boundary-compatible potentials make every term vanish on the
// collar; the ok flags compare magnitudes against the first-power grid scale dx.
struct CompatibilityReport {
  double zero_order[2][2] = {};   // [species][side], side 0 at x = 0, side 1 at x = L
  double first_order[2][2] = {};  // same layout
  double max_zero_order = 0.0;
  double max_first_order = 0.0;
  double tolerance = 0.0;  // acceptance scale the flags compare against (= dx)
  bool zero_order_ok = false;
  bool first_order_ok = false;
  bool collar_resolved = false;  // false: reset collar spans < 2 cells, unverifiable
  bool ok = false;               // both orders within tolerance and collar resolved
};

CompatibilityReport check_compatibility(const Grid1D& grid, const InitialData& data,
                                        const Potentials& pots, const PressureLaw& law,
                                        double eta);

}  // namespace crossdiff
