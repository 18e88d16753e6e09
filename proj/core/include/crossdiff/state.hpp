#pragma once

#include <vector>

namespace crossdiff {

// Per-cell densities of the two species at one instant. Sizes match the grid
// cell count; densities stay nonnegative and each species' discrete mass is
// conserved along a trajectory.
struct State {
  double t = 0.0;
  std::vector<double> rho1, rho2;
};

}  // namespace crossdiff
