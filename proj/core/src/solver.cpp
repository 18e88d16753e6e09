#include "crossdiff/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace crossdiff {

namespace {

void require_cell_sizes(const char* who, const Grid1D& grid, const State& state) {
  const auto n = static_cast<std::size_t>(grid.n);
  if (state.rho1.size() != n || state.rho2.size() != n) {
    std::ostringstream msg;
    msg << who << ": state has " << state.rho1.size() << "/" << state.rho2.size()
        << " cells, grid has " << grid.n;
    throw std::invalid_argument(msg.str());
  }
}

void require_potential_sizes(const char* who, const Grid1D& grid, const Potentials& pots) {
  const auto n = static_cast<std::size_t>(grid.n);
  if (pots.v1.size() != n || pots.v2.size() != n || pots.dv1.size() != n + 1 ||
      pots.dv2.size() != n + 1) {
    std::ostringstream msg;
    msg << who << ": potential fields do not match the grid (n = " << grid.n << ")";
    throw std::invalid_argument(msg.str());
  }
}

std::vector<double> cell_sums(const State& state) {
  std::vector<double> sigma(state.rho1.size());
  for (std::size_t j = 0; j < sigma.size(); ++j) sigma[j] = state.rho1[j] + state.rho2[j];
  return sigma;
}

// pressure evaluations see exact vacuum through the floor; values above the
// floor pass through bitwise
double floored(double s) { return std::max(s, kSFloor); }

Potentials zero_potentials(const Grid1D& grid) {
  const std::vector<double> zeros(static_cast<std::size_t>(grid.n), 0.0);
  return potentials_from_cells(grid, zeros, zeros);
}

}  // namespace

TransformedState transform(const State& state) {
  if (state.rho1.size() != state.rho2.size() || state.rho1.empty()) {
    throw std::invalid_argument("transform: species vectors must be nonempty and equally sized");
  }
  TransformedState ts;
  ts.sigma = cell_sums(state);
  ts.r = build_ratio(state.rho1, state.rho2);
  return ts;
}

RatioFields omega_phi(const Grid1D& grid, const State& state, const Potentials& pots,
                      const XiEvaluator& xi) {
  require_cell_sizes("omega_phi", grid, state);
  require_potential_sizes("omega_phi", grid, pots);
  const TransformedState ts = transform(state);
  const auto n = static_cast<std::size_t>(grid.n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!(ts.sigma[j] > 0.0)) {
      std::ostringstream msg;
      msg << "omega_phi: sigma must be positive, got " << ts.sigma[j] << " at cell " << j;
      throw std::domain_error(msg.str());
    }
  }

  // integrand of the exponent at cell centers: the face values of the
  // potential-difference slope are averaged so a shared potential gives an
  // exact 0.0 and the exponential collapses to 1.0 bitwise
  std::vector<double> q(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double dw = 0.5 * ((pots.dv1[j] - pots.dv2[j]) + (pots.dv1[j + 1] - pots.dv2[j + 1]));
    q[j] = dw * xi.xi_eta(ts.sigma[j]);
  }

  RatioFields rf;
  rf.omega.resize(n);
  rf.phi.resize(n);
  double integral = 0.0;
  rf.omega[0] = std::exp(-integral);
  for (std::size_t j = 1; j < n; ++j) {
    integral += 0.5 * (q[j - 1] + q[j]) * grid.dx;
    rf.omega[j] = std::exp(-integral);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (rf.omega[j] == 1.0) {
      rf.phi[j] = ts.r[j];
    } else {
      const double scaled = ts.r[j] * rf.omega[j];
      rf.phi[j] = scaled / ((1.0 - ts.r[j]) + scaled);
    }
  }
  return rf;
}

FaceFlux face_flux(const Grid1D& grid, const State& state, const Potentials& pots,
                   const PressureLaw& law, double eta) {
  require_cell_sizes("face_flux", grid, state);
  require_potential_sizes("face_flux", grid, pots);
  const auto n = static_cast<std::size_t>(grid.n);
  const std::vector<double> sigma = cell_sums(state);
  std::vector<double> fp(n);
  for (std::size_t j = 0; j < n; ++j) {
    fp[j] = eval_fprime(law, floored(sigma[j]));
    if (!std::isfinite(fp[j])) {
      std::ostringstream msg;
      msg << "face_flux: pressure derivative is not finite at cell " << j
          << " (sigma = " << sigma[j] << ")";
      throw std::runtime_error(msg.str());
    }
  }

  FaceFlux ff;
  ff.species1.assign(n + 1, 0.0);
  ff.species2.assign(n + 1, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double dfp = (fp[k] - fp[k - 1]) / grid.dx;
    const auto one_species = [&](const std::vector<double>& rho, const std::vector<double>& dv) {
      const double u = -dfp - dv[k];
      const double upwind = u > 0.0 ? rho[k - 1] : rho[k];
      return -eta * ((rho[k] - rho[k - 1]) / grid.dx) + upwind * u;
    };
    ff.species1[k] = one_species(state.rho1, pots.dv1);
    ff.species2[k] = one_species(state.rho2, pots.dv2);
  }
  return ff;
}

double cfl_dt(const Grid1D& grid, const State& state, const Potentials& pots,
              const PressureLaw& law, double eta, double safety) {
  require_cell_sizes("cfl_dt", grid, state);
  require_potential_sizes("cfl_dt", grid, pots);
  const auto n = static_cast<std::size_t>(grid.n);
  const std::vector<double> sigma = cell_sums(state);

  double max_sf2 = 0.0;
  std::vector<double> fp(n);
  for (std::size_t j = 0; j < n; ++j) {
    fp[j] = eval_fprime(law, floored(sigma[j]));
    max_sf2 = std::max(max_sf2, sigma[j] * eval_fsecond(law, floored(sigma[j])));
  }

  double max_u = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double dfp = (fp[k] - fp[k - 1]) / grid.dx;
    max_u = std::max(max_u, std::abs(-dfp - pots.dv1[k]));
    max_u = std::max(max_u, std::abs(-dfp - pots.dv2[k]));
  }

  const double inf = std::numeric_limits<double>::infinity();
  const double diff_denom = 2.0 * (eta + max_sf2);
  const double diff_bound = diff_denom > 0.0 ? grid.dx * grid.dx / diff_denom : inf;
  const double adv_bound = max_u > 0.0 ? grid.dx / max_u : inf;
  return safety * std::min(diff_bound, adv_bound);
}

StepResult step(const Grid1D& grid, const State& state, const Potentials& pots,
                const PressureLaw& law, double eta, double dt, const SourceTerm* source) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("step: dt must be positive and finite");
  }
  const FaceFlux ff = face_flux(grid, state, pots, law, eta);
  const auto n = static_cast<std::size_t>(grid.n);
  const double scale = dt / grid.dx;

  StepResult res;
  res.state.t = state.t + dt;

  const auto advance = [&](const std::vector<double>& rho, const std::vector<double>& flux,
                           const std::function<double(double, double)>& src) {
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = rho[j] - scale * (flux[j + 1] - flux[j]);
    if (src) {
      for (std::size_t j = 0; j < n; ++j) out[j] += dt * src(state.t, grid.center(static_cast<int>(j)));
    }

    double pre_clip_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) pre_clip_sum += out[j];
    double clipped = 0.0;
    long long count = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (out[j] < 0.0) {
        clipped -= out[j];
        ++count;
        out[j] = 0.0;
      }
    }
    if (count > 0) {
      const double clipped_mass = clipped * grid.dx;
      if (clipped_mass > kClipFailure) {
        std::ostringstream msg;
        msg << "step: clipped mass " << clipped_mass << " at t = " << state.t
            << " exceeds " << kClipFailure << " (scheme failure)";
        throw std::runtime_error(msg.str());
      }
      if (pre_clip_sum > 0.0) {
        const double factor = pre_clip_sum / (pre_clip_sum + clipped);
        for (std::size_t j = 0; j < n; ++j) out[j] *= factor;
      }
      res.clipped_cells += count;
      res.clipped_mass += clipped_mass;
    }
    return out;
  };

  static const std::function<double(double, double)> no_source;
  res.state.rho1 = advance(state.rho1, ff.species1, source ? source->species1 : no_source);
  res.state.rho2 = advance(state.rho2, ff.species2, source ? source->species2 : no_source);
  return res;
}

Trajectory run(const RunConfig& cfg) {
  const auto fail = [](const std::string& what) {
    throw std::invalid_argument("run: " + what);
  };
  const Grid1D& grid = cfg.grid;
  const auto n = static_cast<std::size_t>(grid.n);
  if (!(cfg.eta > 0.0) || cfg.eta > 1.0) {
    std::ostringstream msg;
    msg << "eta must lie in (0, 1], got " << cfg.eta;
    fail(msg.str());
  }
  if (!(cfg.cfl_safety > 0.0) || cfg.cfl_safety >= 1.0) {
    std::ostringstream msg;
    msg << "cfl_safety must lie in (0, 1), got " << cfg.cfl_safety;
    fail(msg.str());
  }
  if (!(cfg.t_final >= 0.0) || !std::isfinite(cfg.t_final)) {
    std::ostringstream msg;
    msg << "t_final must be a nonnegative finite time, got " << cfg.t_final;
    fail(msg.str());
  }
  if (!(cfg.output_every > 0.0)) {
    std::ostringstream msg;
    msg << "output_every must be positive, got " << cfg.output_every;
    fail(msg.str());
  }
  if (cfg.init.rho1.size() != n || cfg.init.rho2.size() != n) {
    std::ostringstream msg;
    msg << "initial data has " << cfg.init.rho1.size() << "/" << cfg.init.rho2.size()
        << " cells, grid has " << grid.n;
    fail(msg.str());
  }

  Potentials pots = cfg.pots.v1.empty() ? zero_potentials(grid) : cfg.pots;
  require_potential_sizes("run", grid, pots);

  Trajectory tr;
  tr.prepared = (cfg.mollify && cfg.init.provenance == Provenance::raw)
                    ? mollify_initial(grid, cfg.init, cfg.eta, cfg.slow_mollify)
                    : cfg.init;
  const XiEvaluator xi(cfg.law, cfg.eta, cfg.quad_tol, cfg.tail_cutoff);

  State st;
  st.t = 0.0;
  st.rho1 = tr.prepared.rho1;
  st.rho2 = tr.prepared.rho2;

  const long long clamp_base = floor_clamp_count();
  long long clip_cells = 0;
  const auto record = [&](const State& s) {
    tr.snapshots.push_back(s);
    tr.records.push_back(compute_record(grid, s, pots, xi, cfg.diag, clip_cells,
                                        floor_clamp_count() - clamp_base));
  };
  record(st);

  const double t_scale = std::max(1.0, cfg.t_final);
  long long next_output = 1;
  while (st.t < cfg.t_final) {
    double target = std::min(cfg.t_final, cfg.output_every * static_cast<double>(next_output));
    if (cfg.t_final - target < 1e-12 * t_scale) target = cfg.t_final;
    while (target - st.t > 1e-13 * t_scale) {
      double dt = cfl_dt(grid, st, pots, cfg.law, cfg.eta, cfg.cfl_safety);
      dt = std::min(dt, target - st.t);
      if (!(dt > 1e-16 * t_scale)) {
        std::ostringstream msg;
        msg << "run: time step collapsed to " << dt << " at t = " << st.t;
        throw std::runtime_error(msg.str());
      }
      if (cfg.track_dissipation) {
        tr.dissipation_time_integral +=
            dissipation_D(grid, st, pots, cfg.law, cfg.eta) * dt;
      }
      StepResult sr = step(grid, st, pots, cfg.law, cfg.eta, dt, nullptr);
      st = std::move(sr.state);
      clip_cells += sr.clipped_cells;
      tr.total_clipped_cells += sr.clipped_cells;
      tr.max_clipped_mass = std::max(tr.max_clipped_mass, sr.clipped_mass);
      tr.max_dt = std::max(tr.max_dt, dt);
      ++tr.steps;
    }
    st.t = target;
    record(st);
    ++next_output;
  }
  return tr;
}

}  // namespace crossdiff
