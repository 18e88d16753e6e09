#pragma once

namespace crossdiff {

// Uniform cell-centered mesh covering (0, L) exactly: n cells of width dx = L/n,
// centers at (j + 1/2) dx for j = 0..n-1, faces at j dx for j = 0..n.
struct Grid1D {
  Grid1D(int n, double L);

  int n = 0;
  double L = 0.0;
  double dx = 0.0;

  double center(int j) const { return (j + 0.5) * dx; }
  double face(int j) const { return j * dx; }
};

}  // namespace crossdiff
