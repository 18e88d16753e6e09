#include "crossdiff/pressure.hpp"

#include "quadrature.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace crossdiff {

namespace {

std::atomic<long long> g_floor_clamps{0};

// Validates positivity, then clamps into [kSFloor, inf). Fast-diffusion transients may
// graze the floor even though the scheme keeps sigma bounded away from zero.
double checked_clamp(double s, const char* op) {
  if (!(s > 0.0)) {
    std::ostringstream os;
    os << op << ": argument must be positive, got " << s;
    throw std::domain_error(os.str());
  }
  if (s < kSFloor) {
    g_floor_clamps.fetch_add(1, std::memory_order_relaxed);
    return kSFloor;
  }
  return s;
}

void require_params(const PressureLaw& law) {
  if (law.kind == LawKind::power) {
    if (!(law.alpha > 0.0 && law.alpha < 1.0))
      throw std::invalid_argument("power law requires alpha in (0,1)");
    if (!(law.lambda > 0.0)) throw std::invalid_argument("power law requires lambda > 0");
  } else if (law.kind == LawKind::logarithmic) {
    if (!(law.lambda > 0.0)) throw std::invalid_argument("logarithmic law requires lambda > 0");
  }
}

}  // namespace

long long floor_clamp_count() { return g_floor_clamps.load(std::memory_order_relaxed); }
void reset_floor_clamp_count() { g_floor_clamps.store(0, std::memory_order_relaxed); }

PressureLaw PressureLaw::power(double alpha, double lambda) {
  PressureLaw law;
  law.kind = LawKind::power;
  law.alpha = alpha;
  law.lambda = lambda;
  // default structure constant making both conditions hold: the growth condition
  // s^alpha/(alpha*kappa) <= s^2 f'' = lambda*alpha*s^alpha needs kappa >= 1/(alpha^2 lambda),
  // and the log-ratio condition needs kappa >= |s f'''/f''| = 2 - alpha.
  law.kappa = std::max(1.0 / (alpha * alpha * lambda), 2.0 - alpha);
  require_params(law);
  return law;
}

PressureLaw PressureLaw::logarithmic(double lambda, double kappa) {
  PressureLaw law;
  law.kind = LawKind::logarithmic;
  law.lambda = lambda;
  law.kappa = kappa;
  require_params(law);
  return law;
}

PressureLaw PressureLaw::custom(double alpha, double kappa,
                                std::function<double(double)> f,
                                std::function<double(double)> f1,
                                std::function<double(double)> f2,
                                std::function<double(double)> f3) {
  PressureLaw law;
  law.kind = LawKind::custom;
  law.alpha = alpha;
  law.kappa = kappa;
  law.cf = std::move(f);
  law.cf1 = std::move(f1);
  law.cf2 = std::move(f2);
  law.cf3 = std::move(f3);
  if (!(law.alpha > 0.0 && law.alpha < 1.0))
    throw std::invalid_argument("custom law requires alpha in (0,1)");
  if (!(law.kappa > 0.0)) throw std::invalid_argument("custom law requires kappa > 0");
  if (!law.cf || !law.cf1 || !law.cf2 || !law.cf3)
    throw std::invalid_argument("custom law requires all four evaluators");
  return law;
}

double eval_f(const PressureLaw& law, double s) {
  s = checked_clamp(s, "eval_f");
  switch (law.kind) {
    case LawKind::power:
      return law.lambda / (law.alpha - 1.0) * std::pow(s, law.alpha);
    case LawKind::logarithmic:
      return law.lambda * s * std::log(s);
    case LawKind::custom:
      return law.cf(s);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double eval_fprime(const PressureLaw& law, double s) {
  s = checked_clamp(s, "eval_fprime");
  switch (law.kind) {
    case LawKind::power:
      return law.lambda * law.alpha / (law.alpha - 1.0) * std::pow(s, law.alpha - 1.0);
    case LawKind::logarithmic:
      return law.lambda * (std::log(s) + 1.0);
    case LawKind::custom:
      return law.cf1(s);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double eval_fsecond(const PressureLaw& law, double s) {
  s = checked_clamp(s, "eval_fsecond");
  switch (law.kind) {
    case LawKind::power:
      return law.lambda * law.alpha * std::pow(s, law.alpha - 2.0);
    case LawKind::logarithmic:
      return law.lambda / s;
    case LawKind::custom:
      return law.cf2(s);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double eval_fthird(const PressureLaw& law, double s) {
  s = checked_clamp(s, "eval_fthird");
  switch (law.kind) {
    case LawKind::power:
      return law.lambda * law.alpha * (law.alpha - 2.0) * std::pow(s, law.alpha - 3.0);
    case LawKind::logarithmic:
      return -law.lambda / (s * s);
    case LawKind::custom:
      return law.cf3(s);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double eval_g(const PressureLaw& law, double s, double abs_tol) {
  s = checked_clamp(s, "eval_g");
  switch (law.kind) {
    case LawKind::power:
      return law.lambda * (std::pow(s, law.alpha) - 1.0);
    case LawKind::logarithmic:
      return law.lambda * (s - 1.0);
    case LawKind::custom: {
      // g(s) = int_1^s z f''(z) dz; orientation handled by sign flip
      auto integrand = [&law](double z) { return z * law.cf2(z); };
      if (s >= 1.0) return detail::integrate(integrand, 1.0, s, abs_tol);
      return -detail::integrate(integrand, s, 1.0, abs_tol);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

HypothesisReport check_hypothesis(const PressureLaw& law, const std::vector<double>& s_samples) {
  HypothesisReport rep;
  rep.growth_applicable = law.has_power_exponent();
  rep.worst_growth_margin = std::numeric_limits<double>::infinity();
  rep.worst_logratio_margin = std::numeric_limits<double>::infinity();
  rep.min_fsecond = std::numeric_limits<double>::infinity();
  rep.all_pass = true;

  for (double s : s_samples) {
    if (!(s > 0.0)) throw std::domain_error("check_hypothesis: samples must be positive");
    HypothesisSample smp;
    smp.s = s;
    smp.fsecond = eval_fsecond(law, s);
    smp.convex = smp.fsecond > 0.0;
    rep.min_fsecond = std::min(rep.min_fsecond, smp.fsecond);

    if (rep.growth_applicable) {
      smp.growth_margin = s * s * smp.fsecond - std::pow(s, law.alpha) / (law.alpha * law.kappa);
      smp.growth_ok = smp.growth_margin >= -1e-12 * (1.0 + std::abs(s * s * smp.fsecond));
    } else {
      smp.growth_margin = std::numeric_limits<double>::infinity();
      smp.growth_ok = true;
    }

    if (smp.convex) {
      const double ratio = std::abs(s * eval_fthird(law, s) / smp.fsecond);
      smp.logratio_margin = law.kappa - ratio;
      smp.logratio_ok = smp.logratio_margin >= -1e-12 * (1.0 + law.kappa);
    } else {
      // ratio undefined without convexity; the convexity failure itself is the finding
      smp.logratio_margin = -std::numeric_limits<double>::infinity();
      smp.logratio_ok = false;
    }

    rep.worst_growth_margin = std::min(rep.worst_growth_margin, smp.growth_margin);
    rep.worst_logratio_margin = std::min(rep.worst_logratio_margin, smp.logratio_margin);
    rep.all_pass = rep.all_pass && smp.convex && smp.growth_ok && smp.logratio_ok;
    rep.samples.push_back(smp);
  }
  return rep;
}

}  // namespace crossdiff
