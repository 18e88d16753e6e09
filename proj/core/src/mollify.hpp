#pragma once

#include <vector>

#include "crossdiff/grid.hpp"

namespace crossdiff {
namespace detail {

// Effective kernel/collar width for the smoothing pipeline: eta, or sqrt(eta) when
// the slowed re-parameterization is requested. Throws std::invalid_argument unless
// 0 < eta <= 1 and the width fits eight times into the domain.
double mollifier_width(const Grid1D& grid, double eta, bool slow);

// Normalized weights of the discrete cosine-bump kernel 1 + cos(pi x / width)
// sampled at cell offsets k dx with |k| <= taps. Returns {1} (identity) when the
// width does not reach past the cell itself.
struct Kernel {
  std::vector<double> weights;  // size 2*taps + 1, sums to 1
  int taps = 0;
};
Kernel cosine_kernel(double width, double dx);

// Discrete convolution with edge-clamped extension (out-of-range cells take the
// nearest boundary cell's value).
std::vector<double> convolve_clamped(const std::vector<double>& field, const Kernel& kernel);

}  // namespace detail
}  // namespace crossdiff
