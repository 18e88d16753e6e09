#include "crossdiff/initdata.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mollify.hpp"

namespace crossdiff {

namespace {

double mass(const std::vector<double>& rho, double dx) {
  double m = 0.0;
  for (const double v : rho) m += v;
  return m * dx;
}

// Scales the field so its discrete mass is exactly one; the mass must be positive.
void normalize_mass(std::vector<double>& rho, double dx, const char* which) {
  const double m = mass(rho, dx);
  if (!(m > 0.0)) {
    std::ostringstream os;
    os << "initial data: species " << which << " has nonpositive mass " << m;
    throw std::invalid_argument(os.str());
  }
  for (double& v : rho) v /= m;
}

}  // namespace

std::vector<double> build_ratio(const std::vector<double>& rho1,
                                const std::vector<double>& rho2) {
  if (rho1.size() != rho2.size() || rho1.empty())
    throw std::invalid_argument("build_ratio: density fields must be nonempty and equal-sized");
  const std::size_t n = rho1.size();
  std::vector<double> r(n, 0.5);
  std::vector<bool> vacuum(n, false);
  bool any_filled = false;
  for (std::size_t j = 0; j < n; ++j) {
    const double sigma = rho1[j] + rho2[j];
    if (sigma > kVacuumEps) {
      r[j] = std::clamp(rho1[j] / sigma, 0.0, 1.0);
      any_filled = true;
    } else {
      vacuum[j] = true;
    }
  }
  if (!any_filled) return r;  // all-vacuum input keeps the 1/2 fill

  // Nearest non-vacuum fill, ties leftward: sweep distances from both directions.
  const std::size_t far = n + 1;
  std::vector<std::size_t> dist_left(n, far), dist_right(n, far);
  std::vector<double> val_left(n, 0.0), val_right(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (!vacuum[j]) {
      dist_left[j] = 0;
      val_left[j] = r[j];
    } else if (j > 0 && dist_left[j - 1] != far) {
      dist_left[j] = dist_left[j - 1] + 1;
      val_left[j] = val_left[j - 1];
    }
  }
  for (std::size_t j = n; j-- > 0;) {
    if (!vacuum[j]) {
      dist_right[j] = 0;
      val_right[j] = r[j];
    } else if (j + 1 < n && dist_right[j + 1] != far) {
      dist_right[j] = dist_right[j + 1] + 1;
      val_right[j] = val_right[j + 1];
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!vacuum[j]) continue;
    r[j] = dist_left[j] <= dist_right[j] ? val_left[j] : val_right[j];
  }
  return r;
}

InitialData make_preset(const Grid1D& grid, const std::string& name) {
  const std::size_t n = static_cast<std::size_t>(grid.n);
  InitialData data;
  data.rho1.assign(n, 0.0);
  data.rho2.assign(n, 0.0);
  const double L = grid.L;

  if (name == "uniform") {
    for (std::size_t j = 0; j < n; ++j) data.rho1[j] = data.rho2[j] = 1.0 / L;
  } else if (name == "segregated_step") {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = grid.center(static_cast<int>(j));
      (x < 0.5 * L ? data.rho1[j] : data.rho2[j]) = 2.0 / L;
    }
  } else if (name == "mixed_gaussians") {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = grid.center(static_cast<int>(j));
      const double u1 = (x - 0.4 * L) / (0.15 * L);
      const double u2 = (x - 0.6 * L) / (0.15 * L);
      data.rho1[j] = std::exp(-u1 * u1);
      data.rho2[j] = std::exp(-u2 * u2);
    }
  } else if (name == "partial_overlap") {
    const double half = 0.3125 * L;  // supports [0, 0.625 L] and [0.375 L, L]
    for (std::size_t j = 0; j < n; ++j) {
      const double x = grid.center(static_cast<int>(j));
      const double u1 = (x - half) / half;
      const double u2 = (x - (L - half)) / half;
      if (std::abs(u1) < 1.0) data.rho1[j] = 1.0 + std::cos(std::numbers::pi * u1);
      if (std::abs(u2) < 1.0) data.rho2[j] = 1.0 + std::cos(std::numbers::pi * u2);
    }
  } else {
    std::ostringstream os;
    os << "initial data: unknown preset '" << name
       << "' (expected uniform, segregated_step, mixed_gaussians, or partial_overlap)";
    throw std::invalid_argument(os.str());
  }

  normalize_mass(data.rho1, grid.dx, "1");
  normalize_mass(data.rho2, grid.dx, "2");
  data.r = build_ratio(data.rho1, data.rho2);
  return data;
}

InitialData from_samples(const Grid1D& grid, const std::vector<double>& x,
                         const std::vector<double>& rho1,
                         const std::vector<double>& rho2) {
  const std::size_t m = x.size();
  if (m < 2 || rho1.size() != m || rho2.size() != m)
    throw std::invalid_argument("initial data: need at least two equal-length sample columns");
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(rho1[i]) || !std::isfinite(rho2[i]))
      throw std::invalid_argument("initial data: samples must be finite");
    if (i > 0 && !(x[i] > x[i - 1]))
      throw std::invalid_argument("initial data: sample abscissae must be strictly increasing");
    if (rho1[i] < 0.0 || rho2[i] < 0.0)
      throw std::invalid_argument("initial data: sampled densities must be nonnegative");
  }

  auto interp = [&](const std::vector<double>& f, double xq) {
    if (xq <= x.front()) return f.front();
    if (xq >= x.back()) return f.back();
    const auto it = std::upper_bound(x.begin(), x.end(), xq);
    const std::size_t hi = static_cast<std::size_t>(it - x.begin());
    const double t = (xq - x[hi - 1]) / (x[hi] - x[hi - 1]);
    return f[hi - 1] + t * (f[hi] - f[hi - 1]);
  };

  const std::size_t n = static_cast<std::size_t>(grid.n);
  InitialData data;
  data.rho1.assign(n, 0.0);
  data.rho2.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double xc = grid.center(static_cast<int>(j));
    data.rho1[j] = interp(rho1, xc);
    data.rho2[j] = interp(rho2, xc);
  }
  normalize_mass(data.rho1, grid.dx, "1");
  normalize_mass(data.rho2, grid.dx, "2");
  data.r = build_ratio(data.rho1, data.rho2);
  return data;
}

InitialData mollify_initial(const Grid1D& grid, const InitialData& data, double eta,
                            bool slow) {
  const double width = detail::mollifier_width(grid, eta, slow);
  const std::size_t n = static_cast<std::size_t>(grid.n);
  if (data.rho1.size() != n || data.rho2.size() != n || data.r.size() != n)
    throw std::invalid_argument("mollify: initial data does not match the grid size");

  // Collar-raised sigma and collar-zeroed ratio.
  std::vector<double> sig_hat(n), r_hat(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.center(static_cast<int>(j));
    const bool collar = x <= 3.0 * width || x >= grid.L - 3.0 * width;
    sig_hat[j] = collar ? 1.0 : std::max(data.rho1[j] + data.rho2[j], eta);
    r_hat[j] = collar ? 0.0 : data.r[j];
  }

  const detail::Kernel kernel = detail::cosine_kernel(width, grid.dx);
  std::vector<double> sig = detail::convolve_clamped(sig_hat, kernel);
  std::vector<double> rat = detail::convolve_clamped(r_hat, kernel);

  // Reset the inner collar exactly, then normalize sigma to total mass 2.
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.center(static_cast<int>(j));
    if (x <= width || x >= grid.L - width) {
      sig[j] = 1.0;
      rat[j] = 0.0;
    }
  }
  const double sig_mass = mass(sig, grid.dx);
  for (double& v : sig) v *= 2.0 / sig_mass;

  // Fix the ratio scale so each species carries exactly unit mass. Dividing the
  // ratio itself is only admissible when the divisor is at least one; otherwise
  // rescale the complement (divisor 2 - c1 > 1), which fixes the species-2 mass
  // at one and hence species 1 as well, keeping r in [0,1] in both branches.
  double c1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) c1 += rat[j] * sig[j];
  c1 *= grid.dx;

  InitialData out;
  out.provenance = Provenance::mollified;
  out.eta = eta;
  out.width = width;
  out.r.assign(n, 0.0);
  if (c1 >= 1.0) {
    out.c1 = c1;
    for (std::size_t j = 0; j < n; ++j) out.r[j] = rat[j] / c1;
  } else {
    out.c1 = 2.0 - c1;
    for (std::size_t j = 0; j < n; ++j) out.r[j] = 1.0 - (1.0 - rat[j]) / out.c1;
  }

  out.rho1.assign(n, 0.0);
  out.rho2.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    out.rho1[j] = out.r[j] * sig[j];
    out.rho2[j] = (1.0 - out.r[j]) * sig[j];
  }
  return out;
}

namespace {

// Cell-centered first derivative, second order: central in the interior,
// one-sided three-point at the boundary cells. Difference-combination forms
// keep the stencils exactly zero on locally constant data.
std::vector<double> cell_dx(const std::vector<double>& u, double h) {
  const std::size_t n = u.size();
  std::vector<double> d(n, 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (u[j + 1] - u[j - 1]) / (2.0 * h);
  d[0] = (4.0 * (u[1] - u[0]) - (u[2] - u[0])) / (2.0 * h);
  d[n - 1] = (4.0 * (u[n - 1] - u[n - 2]) - (u[n - 1] - u[n - 3])) / (2.0 * h);
  return d;
}

// Cell-centered second derivative: central in the interior, one-sided
// four-point (second order) at the boundary cells.
std::vector<double> cell_dxx(const std::vector<double>& u, double h) {
  const std::size_t n = u.size();
  const double h2 = h * h;
  std::vector<double> d(n, 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j)
    d[j] = ((u[j + 1] - u[j]) - (u[j] - u[j - 1])) / h2;
  d[0] = (2.0 * (u[0] - u[1]) - 3.0 * (u[1] - u[2]) + (u[2] - u[3])) / h2;
  d[n - 1] =
      (2.0 * (u[n - 1] - u[n - 2]) - 3.0 * (u[n - 2] - u[n - 3]) + (u[n - 3] - u[n - 4])) / h2;
  return d;
}

}  // namespace

CompatibilityReport check_compatibility(const Grid1D& grid, const InitialData& data,
                                        const Potentials& pots, const PressureLaw& law,
                                        double eta) {
  const std::size_t n = static_cast<std::size_t>(grid.n);
  if (data.rho1.size() != n || pots.v1.size() != n)
    throw std::invalid_argument("compatibility: data and potentials must match the grid size");
  const double h = grid.dx;

  std::vector<double> sigma(n), fp(n), fpp(n);
  for (std::size_t j = 0; j < n; ++j) {
    sigma[j] = data.rho1[j] + data.rho2[j];
    fp[j] = eval_fprime(law, sigma[j]);
    fpp[j] = eval_fsecond(law, sigma[j]);
  }
  const std::vector<double> dfp = cell_dx(fp, h);

  // Face derivatives of the potentials averaged back to cell centers.
  std::vector<double> dv[2] = {std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    dv[0][j] = 0.5 * (pots.dv1[j] + pots.dv1[j + 1]);
    dv[1][j] = 0.5 * (pots.dv2[j] + pots.dv2[j + 1]);
  }

  const std::vector<double>* rho[2] = {&data.rho1, &data.rho2};
  std::vector<double> zero[2], dop[2];
  for (int i = 0; i < 2; ++i) {
    const std::vector<double> drho = cell_dx(*rho[i], h);
    const std::vector<double> ddrho = cell_dxx(*rho[i], h);
    std::vector<double> drift(n);  // rho_i (dx f'(sigma) + dx V_i)
    for (std::size_t j = 0; j < n; ++j) drift[j] = (*rho[i])[j] * (dfp[j] + dv[i][j]);
    zero[i].assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) zero[i][j] = eta * drho[j] + drift[j];
    const std::vector<double> ddrift = cell_dx(drift, h);
    dop[i].assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) dop[i][j] = eta * ddrho[j] + ddrift[j];
  }

  // Pressure feedback term f''(sigma) (D_1 + D_2) shared by both species.
  std::vector<double> feedback(n);
  for (std::size_t j = 0; j < n; ++j) feedback[j] = fpp[j] * (dop[0][j] + dop[1][j]);
  const std::vector<double> dfeedback = cell_dx(feedback, h);

  CompatibilityReport rep;
  for (int i = 0; i < 2; ++i) {
    const std::vector<double> ddop = cell_dx(dop[i], h);
    for (int side = 0; side < 2; ++side) {
      const std::size_t j = side == 0 ? 0 : n - 1;
      rep.zero_order[i][side] = std::abs(zero[i][j]);
      rep.first_order[i][side] = std::abs(
          eta * ddop[j] + dop[i][j] * (dfp[j] + dv[i][j]) + (*rho[i])[j] * dfeedback[j]);
      rep.max_zero_order = std::max(rep.max_zero_order, rep.zero_order[i][side]);
      rep.max_first_order = std::max(rep.max_first_order, rep.first_order[i][side]);
    }
  }

  rep.tolerance = h;
  rep.zero_order_ok = rep.max_zero_order <= rep.tolerance;
  rep.first_order_ok = rep.max_first_order <= rep.tolerance;
  int collar_cells = 0;
  while (collar_cells < grid.n && grid.center(collar_cells) <= data.width) ++collar_cells;
  rep.collar_resolved = collar_cells >= 2;
  rep.ok = rep.zero_order_ok && rep.first_order_ok && rep.collar_resolved;
  return rep;
}

}  // namespace crossdiff
