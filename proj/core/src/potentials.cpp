#include "crossdiff/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "mollify.hpp"

namespace crossdiff {

namespace detail {

double mollifier_width(const Grid1D& grid, double eta, bool slow) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    std::ostringstream os;
    os << "mollify: eta must lie in (0, 1], got " << eta;
    throw std::invalid_argument(os.str());
  }
  const double width = slow ? std::sqrt(eta) : eta;
  if (width > grid.L / 8.0) {
    std::ostringstream os;
    os << "mollify: collar width " << width << " exceeds L/8 = " << grid.L / 8.0
       << "; eta is too large relative to the domain";
    throw std::invalid_argument(os.str());
  }
  return width;
}

Kernel cosine_kernel(double width, double dx) {
  Kernel k;
  k.taps = static_cast<int>(std::ceil(width / dx)) - 1;
  if (k.taps < 0) k.taps = 0;
  k.weights.assign(2 * static_cast<std::size_t>(k.taps) + 1, 0.0);
  double sum = 0.0;
  for (int i = -k.taps; i <= k.taps; ++i) {
    const double w = 1.0 + std::cos(std::numbers::pi * i * dx / width);
    k.weights[static_cast<std::size_t>(i + k.taps)] = w;
    sum += w;
  }
  for (double& w : k.weights) w /= sum;
  return k;
}

std::vector<double> convolve_clamped(const std::vector<double>& field, const Kernel& kernel) {
  const int n = static_cast<int>(field.size());
  std::vector<double> out(field.size(), 0.0);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int i = -kernel.taps; i <= kernel.taps; ++i) {
      const int src = std::clamp(j - i, 0, n - 1);
      acc += kernel.weights[static_cast<std::size_t>(i + kernel.taps)] *
             field[static_cast<std::size_t>(src)];
    }
    out[static_cast<std::size_t>(j)] = acc;
  }
  return out;
}

}  // namespace detail

namespace {

// One-sided three-point derivative at a boundary face, second order for the
// quadratic through the three nearest cell centers. Written as a combination of
// adjacent differences so it is exactly zero when the three values agree.
double face_slope_left(const std::vector<double>& v, double dx) {
  return (2.0 * (v[1] - v[0]) + (v[1] - v[2])) / dx;
}
double face_slope_right(const std::vector<double>& v, double dx) {
  const std::size_t n = v.size();
  return (2.0 * (v[n - 1] - v[n - 2]) - (v[n - 2] - v[n - 3])) / dx;
}

std::vector<double> face_derivatives(const Grid1D& grid, const std::vector<double>& v) {
  const std::size_t n = static_cast<std::size_t>(grid.n);
  std::vector<double> dv(n + 1, 0.0);
  for (std::size_t j = 1; j < n; ++j) dv[j] = (v[j] - v[j - 1]) / grid.dx;
  dv[0] = face_slope_left(v, grid.dx);
  dv[n] = face_slope_right(v, grid.dx);
  return dv;
}

}  // namespace

Potentials potentials_from_cells(const Grid1D& grid, std::vector<double> v1,
                                 std::vector<double> v2) {
  const std::size_t n = static_cast<std::size_t>(grid.n);
  if (v1.size() != n || v2.size() != n)
    throw std::invalid_argument("potentials: sample vectors must match the grid size");
  for (std::size_t j = 0; j < n; ++j)
    if (!std::isfinite(v1[j]) || !std::isfinite(v2[j]))
      throw std::invalid_argument("potentials: samples must be finite");

  Potentials p;
  p.v1 = std::move(v1);
  p.v2 = std::move(v2);
  p.dv1 = face_derivatives(grid, p.v1);
  p.dv2 = face_derivatives(grid, p.v2);

  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = p.v1[j] - p.v2[j];
  const double h2 = grid.dx * grid.dx;
  const double h3 = h2 * grid.dx;

  // Difference-combination forms keep every stencil exactly zero on constant data.
  p.d2w.assign(n, 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j)
    p.d2w[j] = ((w[j + 1] - w[j]) - (w[j] - w[j - 1])) / h2;
  p.d2w[0] = (2.0 * (w[0] - w[1]) - 3.0 * (w[1] - w[2]) + (w[2] - w[3])) / h2;
  p.d2w[n - 1] =
      (2.0 * (w[n - 1] - w[n - 2]) - 3.0 * (w[n - 2] - w[n - 3]) + (w[n - 3] - w[n - 4])) / h2;

  p.d3w.assign(n, 0.0);
  for (std::size_t j = 2; j + 2 < n; ++j)
    p.d3w[j] =
        ((w[j + 2] - w[j + 1]) - (w[j + 1] - w[j - 1]) + (w[j - 1] - w[j - 2])) / (2.0 * h3);
  p.d3w[0] = p.d3w[1] = p.d3w[2];
  p.d3w[n - 1] = p.d3w[n - 2] = p.d3w[n - 3];

  p.boundary_compatible =
      p.dv1[0] == 0.0 && p.dv1[n] == 0.0 && p.dv2[0] == 0.0 && p.dv2[n] == 0.0;
  return p;
}

Potentials sample_potentials(const Grid1D& grid, const std::function<double(double)>& V1,
                             const std::function<double(double)>& V2) {
  if (!V1 || !V2) throw std::invalid_argument("potentials: callables must be set");
  std::vector<double> v1(static_cast<std::size_t>(grid.n)), v2(v1.size());
  for (int j = 0; j < grid.n; ++j) {
    v1[static_cast<std::size_t>(j)] = V1(grid.center(j));
    v2[static_cast<std::size_t>(j)] = V2(grid.center(j));
  }
  return potentials_from_cells(grid, std::move(v1), std::move(v2));
}

namespace {

bool all_equal(const std::vector<double>& v) {
  for (const double x : v)
    if (x != v[0]) return false;
  return true;
}

double smoothstep(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * (3.0 - 2.0 * u);
}

// Smooth one potential: convolve with the kernel, hold the collar cells at a
// constant, and ramp back to the smoothed interior over an equal width.
std::vector<double> mollify_one(const Grid1D& grid, const std::vector<double>& v,
                                const detail::Kernel& kernel, double collar) {
  std::vector<double> out = detail::convolve_clamped(v, kernel);
  const std::size_t n = out.size();

  std::size_t first_free = 0;  // first cell past the left constant region
  while (first_free < n && grid.center(static_cast<int>(first_free)) <= collar) ++first_free;
  std::size_t last_free = n;  // one past the last cell before the right constant region
  while (last_free > 0 && grid.center(static_cast<int>(last_free - 1)) >= grid.L - collar)
    --last_free;

  const double left_const = out[std::min(first_free, n - 1)];
  const double right_const = out[last_free > 0 ? last_free - 1 : 0];
  for (std::size_t j = 0; j < first_free; ++j) out[j] = left_const;
  for (std::size_t j = last_free; j < n; ++j) out[j] = right_const;
  for (std::size_t j = first_free; j < last_free; ++j) {
    const double x = grid.center(static_cast<int>(j));
    const double tl = smoothstep((x - collar) / collar);
    const double tr = smoothstep((grid.L - collar - x) / collar);
    out[j] = left_const + tl * (out[j] - left_const);
    out[j] = right_const + tr * (out[j] - right_const);
  }
  return out;
}

}  // namespace

Potentials mollify_potentials(const Grid1D& grid, const Potentials& raw, double eta,
                              bool slow) {
  const double width = detail::mollifier_width(grid, eta, slow);
  const double collar = std::max(width, 3.0 * grid.dx);
  const detail::Kernel kernel = detail::cosine_kernel(width, grid.dx);

  std::vector<double> v1 = all_equal(raw.v1) ? raw.v1 : mollify_one(grid, raw.v1, kernel, collar);
  std::vector<double> v2 = all_equal(raw.v2) ? raw.v2 : mollify_one(grid, raw.v2, kernel, collar);
  return potentials_from_cells(grid, std::move(v1), std::move(v2));
}

}  // namespace crossdiff
