#pragma once

#include <functional>
#include <vector>

namespace crossdiff {

// Pressure laws f driving the aggregate diffusion sigma*f''(sigma).
//
// Built-in laws on s > 0:
//   power:        f(s) = lambda/(alpha-1) * s^alpha,  alpha in (0,1), lambda > 0
//                 (fast diffusion: f'' = lambda*alpha*s^(alpha-2) > 0)
//   logarithmic:  f(s) = lambda * s * log(s)          (f'' = lambda/s, linear aggregate diffusion)
//   custom:       caller supplies f, f', f'', f''' as callables; alpha/kappa describe the
//                 structure conditions the law is expected to satisfy (see check_hypothesis).
//
// The structure conditions used throughout (for power/custom laws):
//   convexity:    f''(s) > 0
//   growth:       s^alpha/(alpha*kappa) <= s^2 f''(s)
//   log-ratio:    |s f'''(s)/f''(s)| <= kappa

enum class LawKind { power, logarithmic, custom };

struct PressureLaw {
  LawKind kind = LawKind::logarithmic;
  double alpha = 0.0;   // growth exponent in (0,1); meaningful for power/custom laws
  double lambda = 1.0;  // positive scale
  double kappa = 1.0;   // structure constant, > 0

  // evaluators for custom laws (unused for power/logarithmic)
  std::function<double(double)> cf, cf1, cf2, cf3;

  static PressureLaw power(double alpha, double lambda);
  static PressureLaw logarithmic(double lambda, double kappa = 1.0);
  static PressureLaw custom(double alpha, double kappa,
                            std::function<double(double)> f,
                            std::function<double(double)> f1,
                            std::function<double(double)> f2,
                            std::function<double(double)> f3);

  // the growth/log-ratio conditions are phrased through alpha; the logarithmic law has none
  bool has_power_exponent() const { return kind != LawKind::logarithmic; }
};

// Fast-diffusion derivatives diverge as s -> 0+. Evaluation clamps s to this floor;
// each clamped call increments a process-wide counter surfaced in diagnostics records.
inline constexpr double kSFloor = 1e-12;

// Aggregate count of floor-clamped evaluations since process start (or last reset).
// Shared across threads; per-run attribution is by before/after deltas.
long long floor_clamp_count();
void reset_floor_clamp_count();

double eval_f(const PressureLaw& law, double s);
double eval_fprime(const PressureLaw& law, double s);
double eval_fsecond(const PressureLaw& law, double s);
double eval_fthird(const PressureLaw& law, double s);

// g(s) = integral from 1 to s of z f''(z) dz. Closed forms: lambda*(s^alpha - 1) (power),
// lambda*(s - 1) (logarithmic); custom laws integrate adaptively to abs_tol.
double eval_g(const PressureLaw& law, double s, double abs_tol = 1e-10);

struct HypothesisSample {
  double s = 0.0;
  double fsecond = 0.0;
  double growth_margin = 0.0;    // s^2 f''(s) - s^alpha/(alpha*kappa); >= 0 passes
  double logratio_margin = 0.0;  // kappa - |s f'''(s)/f''(s)|;         >= 0 passes
  bool convex = false;
  bool growth_ok = false;
  bool logratio_ok = false;
};

struct HypothesisReport {
  std::vector<HypothesisSample> samples;
  bool growth_applicable = false;  // false for the logarithmic law (no growth exponent)
  double worst_growth_margin = 0.0;
  double worst_logratio_margin = 0.0;
  double min_fsecond = 0.0;
  bool all_pass = false;
};

// Report-only numerical audit of the structure conditions at the given samples.
HypothesisReport check_hypothesis(const PressureLaw& law, const std::vector<double>& s_samples);

}  // namespace crossdiff
