#include "crossdiff/diagnostics.hpp"

#include "crossdiff/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace crossdiff {

namespace {

double clamped(double s) { return std::max(s, kSFloor); }

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// squared interior face differences integrated over the domain; boundary
// faces carry zero slope, matching the no-flux scheme
double face_grad_l2_sq(const Grid1D& grid, const std::vector<double>& w) {
  double acc = 0.0;
  for (std::size_t k = 1; k < w.size(); ++k) {
    const double d = (w[k] - w[k - 1]) / grid.dx;
    acc += d * d;
  }
  return acc * grid.dx;
}

double l1_norm(const Grid1D& grid, const std::vector<double>& w) {
  double acc = 0.0;
  for (const double v : w) acc += std::abs(v);
  return acc * grid.dx;
}

std::vector<double> clamped_pow(const std::vector<double>& sigma, double e) {
  std::vector<double> w(sigma.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::pow(clamped(sigma[j]), e);
  return w;
}

std::vector<double> clamped_log(const std::vector<double>& sigma) {
  std::vector<double> w(sigma.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::log(clamped(sigma[j]));
  return w;
}

// rho-weighted integral of the cell average of squared face slopes, the
// common body of dissipation_D and fisher_information; slope_at(k) is the
// face value for k = 1..n-1 and the boundary faces contribute zero
template <typename SlopeAt>
double weighted_face_square_integral(const Grid1D& grid, const std::vector<double>& weight,
                                     SlopeAt&& slope_at) {
  const std::size_t n = weight.size();
  std::vector<double> sq(n + 1, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double g = slope_at(k);
    sq[k] = g * g;
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += weight[j] * (0.5 * (sq[j] + sq[j + 1]));
  return acc * grid.dx;
}

void require_grid_sizes(const char* who, const Grid1D& grid, const State& state,
                        const Potentials& pots) {
  const auto n = static_cast<std::size_t>(grid.n);
  if (state.rho1.size() != n || state.rho2.size() != n || pots.v1.size() != n ||
      pots.v2.size() != n || pots.dv1.size() != n + 1 || pots.dv2.size() != n + 1) {
    std::ostringstream msg;
    msg << who << ": state or potential fields do not match the grid (n = " << grid.n << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

double discrete_tv(const std::vector<double>& u) {
  double tv = 0.0;
  for (std::size_t j = 1; j < u.size(); ++j) tv += std::abs(u[j] - u[j - 1]);
  return tv;
}

double energy_F(const Grid1D& grid, const State& state, const Potentials& pots,
                const PressureLaw& law, double eta) {
  require_grid_sizes("energy_F", grid, state, pots);
  const auto n = static_cast<std::size_t>(grid.n);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double sigma = clamped(state.rho1[j] + state.rho2[j]);
    acc += eval_f(law, sigma) + eta * (xlogx(state.rho1[j]) + xlogx(state.rho2[j])) +
           pots.v1[j] * state.rho1[j] + pots.v2[j] * state.rho2[j];
  }
  return acc * grid.dx;
}

double dissipation_D(const Grid1D& grid, const State& state, const Potentials& pots,
                     const PressureLaw& law, double eta) {
  require_grid_sizes("dissipation_D", grid, state, pots);
  const auto n = static_cast<std::size_t>(grid.n);
  std::vector<double> fp(n);
  for (std::size_t j = 0; j < n; ++j)
    fp[j] = eval_fprime(law, clamped(state.rho1[j] + state.rho2[j]));

  const auto species = [&](const std::vector<double>& rho, const std::vector<double>& dv) {
    return weighted_face_square_integral(grid, rho, [&](std::size_t k) {
      const double dfp = (fp[k] - fp[k - 1]) / grid.dx;
      const double dlog = (std::log(clamped(rho[k])) - std::log(clamped(rho[k - 1]))) / grid.dx;
      return dfp + dv[k] + eta * dlog;
    });
  };
  return species(state.rho1, pots.dv1) + species(state.rho2, pots.dv2);
}

LpLedger lp_ledger(const Grid1D& grid, const std::vector<double>& sigma,
                   const PressureLaw& law, const std::vector<double>& p_list,
                   double theta) {
  if (sigma.size() != static_cast<std::size_t>(grid.n)) {
    throw std::invalid_argument("lp_ledger: sigma does not match the grid");
  }
  LpLedger led;
  for (const double p : p_list) {
    double acc = 0.0;
    for (const double s : sigma) acc += std::pow(clamped(s), p);
    led.lp_norms[p] = acc * grid.dx;
  }
  double rec = 0.0;
  for (const double s : sigma) rec += std::pow(clamped(s), -theta);
  led.reciprocal_norm = rec * grid.dx;
  for (const double p : p_list) {
    const double e = 0.5 * (p + law.alpha - 1.0);
    const std::vector<double> w = e == 0.0 ? clamped_log(sigma) : clamped_pow(sigma, e);
    led.grad_seminorms[p] = face_grad_l2_sq(grid, w);
  }
  return led;
}

double fisher_information(const Grid1D& grid, const std::vector<double>& sigma,
                          const PressureLaw& law) {
  if (sigma.size() != static_cast<std::size_t>(grid.n)) {
    throw std::invalid_argument("fisher_information: sigma does not match the grid");
  }
  std::vector<double> fp(sigma.size());
  for (std::size_t j = 0; j < sigma.size(); ++j) fp[j] = eval_fprime(law, clamped(sigma[j]));
  return weighted_face_square_integral(
      grid, sigma, [&](std::size_t k) { return (fp[k] - fp[k - 1]) / grid.dx; });
}

BLedger b_ledger(const Grid1D& grid, const std::vector<double>& sigma,
                 const PressureLaw& law, double eta) {
  if (sigma.size() != static_cast<std::size_t>(grid.n)) {
    throw std::invalid_argument("b_ledger: sigma does not match the grid");
  }
  BLedger led;
  const auto add = [&led](const char* name, double value) {
    led.entries.emplace_back(name, value);
    led.b_hat += value;
  };

  if (!law.has_power_exponent()) {
    add("grad_log_sigma_sq", face_grad_l2_sq(grid, clamped_log(sigma)));
    return led;
  }

  const double a = law.alpha;
  const auto w11 = [&](double e) {
    const std::vector<double> w = clamped_pow(sigma, e);
    return l1_norm(grid, w) + discrete_tv(w);
  };
  add("sqrt_sigma_grad_fprime_sq", fisher_information(grid, sigma, law));
  add("sigma_pow_1ma_w11", w11(1.0 - a));
  add("grad_log_sigma_sq", face_grad_l2_sq(grid, clamped_log(sigma)));
  add("sigma_pow_1m2a_l1", l1_norm(grid, clamped_pow(sigma, 1.0 - 2.0 * a)));
  add("eta_sigma_pow_2m2a_w11", eta * w11(2.0 - 2.0 * a));
  add("eta_grad_sigma_pow_half_1ma_sq",
      eta * face_grad_l2_sq(grid, clamped_pow(sigma, 0.5 * (1.0 - a))));
  add("eta2_grad_sigma_pow_3m3a_l1",
      eta * eta * discrete_tv(clamped_pow(sigma, 3.0 * (1.0 - a))));
  add("eta2_grad_sigma_pow_1ma_sq",
      eta * eta * face_grad_l2_sq(grid, clamped_pow(sigma, 1.0 - a)));
  add("eta3_grad_sigma_pow_half_3m3a_sq",
      eta * eta * eta * face_grad_l2_sq(grid, clamped_pow(sigma, 1.5 * (1.0 - a))));
  return led;
}

DiagnosticsRecord compute_record(const Grid1D& grid, const State& state,
                                 const Potentials& pots, const XiEvaluator& xi,
                                 const DiagnosticsConfig& cfg, long long clip_counter,
                                 long long clamp_counter) {
  require_grid_sizes("compute_record", grid, state, pots);
  const PressureLaw& law = xi.law();
  const double eta = xi.eta();
  const TransformedState ts = transform(state);
  const RatioFields rf = omega_phi(grid, state, pots, xi);

  DiagnosticsRecord rec;
  rec.t = state.t;
  double m1 = 0.0, m2 = 0.0;
  double lo = ts.sigma[0], hi = ts.sigma[0];
  for (int j = 0; j < grid.n; ++j) {
    m1 += state.rho1[j];
    m2 += state.rho2[j];
    lo = std::min(lo, ts.sigma[j]);
    hi = std::max(hi, ts.sigma[j]);
  }
  rec.mass1 = m1 * grid.dx;
  rec.mass2 = m2 * grid.dx;
  rec.tv_r = discrete_tv(ts.r);
  rec.tv_phi = discrete_tv(rf.phi);
  rec.energy = energy_F(grid, state, pots, law, eta);
  rec.dissipation = dissipation_D(grid, state, pots, law, eta);
  rec.lp = lp_ledger(grid, ts.sigma, law, cfg.p_list, cfg.theta);
  rec.fisher = fisher_information(grid, ts.sigma, law);
  rec.b = b_ledger(grid, ts.sigma, law, eta);
  rec.min_sigma = lo;
  rec.max_sigma = hi;
  rec.clip_counter = clip_counter;
  rec.clamp_counter = clamp_counter;
  return rec;
}

GronwallReport gronwall_monitor(const std::vector<DiagnosticsRecord>& records) {
  if (records.size() < 2) {
    throw std::invalid_argument("gronwall_monitor: needs at least two records");
  }
  const std::size_t m = records.size();
  std::vector<double> prefix(m, 0.0);
  for (std::size_t k = 1; k < m; ++k) {
    prefix[k] = prefix[k - 1] + 0.5 * (records[k - 1].b.b_hat + records[k].b.b_hat) *
                                    (records[k].t - records[k - 1].t);
  }
  GronwallReport rep;
  rep.b_hat_integral = prefix.back();
  for (std::size_t k0 = 0; k0 < m; ++k0) {
    for (std::size_t k1 = k0 + 1; k1 < m; ++k1) {
      const double ratio = (records[k1].tv_phi + 1.0) /
                           ((records[k0].tv_phi + 1.0) * std::exp(prefix[k1] - prefix[k0]));
      rep.c_g = std::max(rep.c_g, ratio);
    }
  }
  for (const DiagnosticsRecord& rec : records) {
    rep.max_tv_r_growth = std::max(rep.max_tv_r_growth, rec.tv_r - records.front().tv_r);
  }
  return rep;
}

}  // namespace crossdiff
