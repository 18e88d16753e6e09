#pragma once

#include <functional>
#include <vector>

#include "crossdiff/grid.hpp"

namespace crossdiff {

// Drift potentials sampled on a grid.
//
// Cell-centered values v1, v2 (size n); face-centered first derivatives dv1, dv2
// (size n+1, difference quotients of adjacent cell values at interior faces,
// one-sided three-point quotients at the two boundary faces); cell-centered second
// and third derivatives of the difference W = V1 - V2 (sizes n), which feed the
// inhomogeneity diagnostics. Third differences are centered; the two cells nearest
// each boundary copy the nearest interior value.
//
// boundary_compatible is true only when dv1 and dv2 are exactly zero at both
// boundary faces (the discrete no-slope condition the no-flux scheme relies on).
struct Potentials {
  std::vector<double> v1, v2;    // cell centers, size n
  std::vector<double> dv1, dv2;  // faces, size n+1
  std::vector<double> d2w, d3w;  // d^2(V1-V2), d^3(V1-V2) at centers, size n
  bool boundary_compatible = false;
};

// Assembles the derivative fields from cell-center samples (sizes must equal grid.n).
Potentials potentials_from_cells(const Grid1D& grid, std::vector<double> v1,
                                 std::vector<double> v2);

// Samples the callables at cell centers and assembles the derivative fields.
Potentials sample_potentials(const Grid1D& grid, const std::function<double(double)>& V1,
                             const std::function<double(double)>& V2);

// Smooths both potentials with the cosine-bump kernel (constant extension past the
// boundary) and blends each to a constant on the boundary collars, so the output
// carries exactly zero derivative at both boundary faces. The collar width is eta
// (sqrt(eta) when slow is set), widened to cover at least three cells so the
// discrete no-slope condition holds exactly on coarse grids; a smoothstep ramp
// rejoins the smoothed interior over an equal width. A potential whose samples are
// all equal passes through unchanged.
Potentials mollify_potentials(const Grid1D& grid, const Potentials& raw, double eta,
                              bool slow = false);

}  // namespace crossdiff
