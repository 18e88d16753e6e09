#include "crossdiff/weakcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "crossdiff/potentials.hpp"

namespace crossdiff {

namespace {

constexpr double kPi = 3.14159265358979323846;

double floored(double s) { return std::max(s, kSFloor); }

const std::vector<double>& species_field(const State& state, int species) {
  return species == 1 ? state.rho1 : state.rho2;
}

void require_species(const char* op, int species) {
  if (species != 1 && species != 2) {
    throw std::invalid_argument(std::string(op) + ": species index must be 1 or 2, got " +
                                std::to_string(species));
  }
}

void require_snapshot_sizes(const char* op, const Grid1D& grid,
                            const Trajectory& trajectory) {
  for (const State& st : trajectory.snapshots) {
    if (static_cast<int>(st.rho1.size()) != grid.n ||
        static_cast<int>(st.rho2.size()) != grid.n) {
      throw std::invalid_argument(std::string(op) +
                                  ": snapshot size does not match the grid");
    }
  }
}

// cell-centered drift dx(f'(sigma) + V_i): mean of the adjacent face
// quotients, with the boundary faces carrying zero like the flux stencil
std::vector<double> cell_drift(const Grid1D& grid, const State& state,
                               const std::vector<double>& dv, const PressureLaw& law) {
  const int n = grid.n;
  std::vector<double> fp(n);
  for (int j = 0; j < n; ++j) {
    fp[j] = eval_fprime(law, floored(state.rho1[j] + state.rho2[j]));
  }
  std::vector<double> face(n + 1, 0.0);
  for (int k = 1; k < n; ++k) {
    face[k] = (fp[k] - fp[k - 1]) / grid.dx + dv[k];
  }
  std::vector<double> drift(n);
  for (int j = 0; j < n; ++j) {
    drift[j] = 0.5 * (face[j] + face[j + 1]);
  }
  return drift;
}

double time_trapezoid(const std::vector<double>& times, const std::vector<double>& values) {
  double acc = 0.0;
  for (std::size_t m = 1; m < times.size(); ++m) {
    acc += 0.5 * (values[m - 1] + values[m]) * (times[m] - times[m - 1]);
  }
  return acc;
}

}  // namespace

double TestFunction::psi(double t) const {
  const double s = 1.0 - t / t_off;
  return s > 0.0 ? s * s : 0.0;
}

double TestFunction::dpsi(double t) const {
  const double s = 1.0 - t / t_off;
  return s > 0.0 ? -2.0 * s / t_off : 0.0;
}

double TestFunction::phi(double t, double x) const {
  return psi(t) * std::cos(mode * kPi * x / length);
}

double TestFunction::dphi_dt(double t, double x) const {
  return dpsi(t) * std::cos(mode * kPi * x / length);
}

double TestFunction::dphi_dx(double t, double x) const {
  const double w = mode * kPi / length;
  return -psi(t) * w * std::sin(w * x);
}

double TestFunction::dphi_dxx(double t, double x) const {
  const double w = mode * kPi / length;
  return -psi(t) * w * w * std::cos(w * x);
}

TestFunction make_test_function(int mode, double t_off, double length, double horizon) {
  if (mode < 0) {
    throw std::invalid_argument("make_test_function: mode must be nonnegative, got " +
                                std::to_string(mode));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("make_test_function: length must be positive, got " +
                                std::to_string(length));
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("make_test_function: horizon must be positive, got " +
                                std::to_string(horizon));
  }
  if (!(t_off > 0.0) || t_off > horizon) {
    throw std::invalid_argument("make_test_function: t_off must lie in (0, horizon], got " +
                                std::to_string(t_off) + " with horizon " +
                                std::to_string(horizon));
  }
  TestFunction tf;
  tf.mode = mode;
  tf.t_off = t_off;
  tf.length = length;
  tf.horizon = horizon;
  return tf;
}

double weak_residual(const Grid1D& grid, const Trajectory& trajectory,
                     const Potentials& pots, const PressureLaw& law, double eta,
                     const TestFunction& testfn, int species) {
  require_species("weak_residual", species);
  const std::size_t count = trajectory.snapshots.size();
  if (count < 8) {
    throw std::invalid_argument("weak_residual: needs at least 8 snapshots, got " +
                                std::to_string(count));
  }
  require_snapshot_sizes("weak_residual", grid, trajectory);
  const std::vector<double>& dv = species == 1 ? pots.dv1 : pots.dv2;
  if (static_cast<int>(dv.size()) != grid.n + 1) {
    throw std::invalid_argument("weak_residual: potential faces do not match the grid");
  }

  const int n = grid.n;
  const State& first = trajectory.snapshots.front();

  double initial = 0.0;
  for (int j = 0; j < n; ++j) {
    initial += species_field(first, species)[j] * testfn.phi(first.t, grid.center(j));
  }
  initial *= grid.dx;

  std::vector<double> times(count), time_terms(count), drift_terms(count),
      viscous_terms(count);
  for (std::size_t m = 0; m < count; ++m) {
    const State& st = trajectory.snapshots[m];
    const std::vector<double>& rho = species_field(st, species);
    const std::vector<double> drift = cell_drift(grid, st, dv, law);
    double a = 0.0, b = 0.0, c = 0.0;
    for (int j = 0; j < n; ++j) {
      const double x = grid.center(j);
      a += rho[j] * testfn.dphi_dt(st.t, x);
      b += rho[j] * drift[j] * testfn.dphi_dx(st.t, x);
      c += rho[j] * testfn.dphi_dxx(st.t, x);
    }
    times[m] = st.t;
    time_terms[m] = a * grid.dx;
    drift_terms[m] = b * grid.dx;
    viscous_terms[m] = c * grid.dx;
  }

  const double evolution = time_trapezoid(times, time_terms);
  const double transport = time_trapezoid(times, drift_terms);
  const double viscous = eta * time_trapezoid(times, viscous_terms);

  const double defect = std::abs(initial + evolution - transport + viscous);
  const double scale = std::max(
      {std::abs(initial), std::abs(evolution), std::abs(transport), 1.0});
  return defect / scale;
}

SweepTable residual_sweep(const std::function<RunConfig(double, int)>& make_config,
                          const std::vector<double>& etas, const std::vector<int>& ns,
                          int mode_count) {
  if (etas.empty() || ns.empty()) {
    throw std::invalid_argument("residual_sweep: eta and grid lists must be nonempty");
  }
  if (etas.size() != ns.size()) {
    throw std::invalid_argument(
        "residual_sweep: eta and grid lists must have equal lengths, got " +
        std::to_string(etas.size()) + " and " + std::to_string(ns.size()));
  }
  if (mode_count < 0) {
    throw std::invalid_argument("residual_sweep: mode count must be nonnegative, got " +
                                std::to_string(mode_count));
  }

  SweepTable table;
  for (std::size_t i = 0; i < etas.size(); ++i) {
    const RunConfig cfg = make_config(etas[i], ns[i]);
    const Trajectory tr = run(cfg);
    Potentials pots = cfg.pots;
    if (pots.v1.empty()) {
      pots = potentials_from_cells(cfg.grid, std::vector<double>(cfg.grid.n, 0.0),
                                   std::vector<double>(cfg.grid.n, 0.0));
    }
    double worst = 0.0;
    for (int mode = 0; mode <= mode_count; ++mode) {
      const TestFunction tf =
          make_test_function(mode, cfg.t_final, cfg.grid.L, cfg.t_final);
      double residual = 0.0;
      for (int species : {1, 2}) {
        residual = std::max(
            residual, weak_residual(cfg.grid, tr, pots, cfg.law, cfg.eta, tf, species));
      }
      table.rows.push_back(SweepRow{etas[i], ns[i], mode, residual});
      worst = std::max(worst, residual);
    }
    table.max_residuals.push_back(worst);
  }

  table.monotone_decreasing = true;
  for (std::size_t i = 1; i < table.max_residuals.size(); ++i) {
    if (!(table.max_residuals[i] < table.max_residuals[i - 1])) {
      table.monotone_decreasing = false;
      break;
    }
  }
  return table;
}

double l1_cauchy_distance(const Grid1D& coarse_grid, const Trajectory& coarse,
                          const Grid1D& fine_grid, const Trajectory& fine,
                          int species) {
  require_species("l1_cauchy_distance", species);
  const std::size_t count = coarse.snapshots.size();
  if (count != fine.snapshots.size()) {
    throw std::invalid_argument("l1_cauchy_distance: snapshot counts differ, got " +
                                std::to_string(count) + " and " +
                                std::to_string(fine.snapshots.size()));
  }
  if (count < 2) {
    throw std::invalid_argument("l1_cauchy_distance: needs at least two snapshots, got " +
                                std::to_string(count));
  }
  require_snapshot_sizes("l1_cauchy_distance", coarse_grid, coarse);
  require_snapshot_sizes("l1_cauchy_distance", fine_grid, fine);

  std::vector<double> times(count), distances(count);
  for (std::size_t m = 0; m < count; ++m) {
    const State& cs = coarse.snapshots[m];
    const State& fs = fine.snapshots[m];
    const double tolerance = 1e-9 * std::max(1.0, std::abs(cs.t));
    if (std::abs(cs.t - fs.t) > tolerance) {
      throw std::invalid_argument("l1_cauchy_distance: snapshot times diverge at index " +
                                  std::to_string(m) + " (" + std::to_string(cs.t) +
                                  " vs " + std::to_string(fs.t) + ")");
    }
    const std::vector<double>& cv = species_field(cs, species);
    const std::vector<double>& fv = species_field(fs, species);
    double acc = 0.0;
    for (int j = 0; j < fine_grid.n; ++j) {
      // piecewise-linear reconstruction through the coarse cell centers,
      // clamped to the end values beyond the first and last center
      const double pos = fine_grid.center(j) / coarse_grid.dx - 0.5;
      double interpolated;
      if (pos <= 0.0) {
        interpolated = cv.front();
      } else if (pos >= coarse_grid.n - 1) {
        interpolated = cv.back();
      } else {
        const int k = static_cast<int>(pos);
        interpolated = cv[k] + (pos - k) * (cv[k + 1] - cv[k]);
      }
      acc += std::abs(fv[j] - interpolated);
    }
    times[m] = fs.t;
    distances[m] = acc * fine_grid.dx;
  }
  return time_trapezoid(times, distances);
}

double grad_g_l1(const Grid1D& grid, const State& state, const PressureLaw& law) {
  if (static_cast<int>(state.rho1.size()) != grid.n ||
      static_cast<int>(state.rho2.size()) != grid.n) {
    throw std::invalid_argument("grad_g_l1: state size does not match the grid");
  }
  double acc = 0.0;
  for (int k = 1; k < grid.n; ++k) {
    const double left = state.rho1[k - 1] + state.rho2[k - 1];
    const double right = state.rho1[k] + state.rho2[k];
    const double quotient =
        (eval_fprime(law, floored(right)) - eval_fprime(law, floored(left))) / grid.dx;
    acc += std::abs(0.5 * (left + right) * quotient);
  }
  return acc * grid.dx;
}

}  // namespace crossdiff
