#pragma once

// Evaluation of the nonlinearity xi and its viscous counterpart xi_eta.
//
//   xi(s)     = -s * Int_s^inf 1 / (y^3 f''(y)) dy
//   xi_eta(s) = -s * Int_s^inf exp(-(E(y) - E(s))) / (y^3 f''(y)) dy,
//
// where E is an antiderivative of 2*eta / (y^2 f''(y)). xi_eta solves the
// linear ODE
//
//   xi_eta'(s) s^2 f''(s) - xi_eta(s) (2 eta + s f''(s)) = 1,
//
// which supplies first and second derivatives exactly (no numerical
// differentiation) and doubles as an independent correctness check: see
// ode_residual. Both xi and xi_eta are negative, xi_eta shrinks toward zero
// as eta grows, and at eta = 0 the two coincide.

#include "crossdiff/pressure.hpp"

#include <memory>
#include <vector>

namespace crossdiff {

// Per-sample margins for the bound battery. Each margin is bound - |value|,
// so a nonnegative margin means the inequality holds at that sample. The
// power-family entries are NaN for laws without a power exponent.
struct XiBoundSample {
  double s = 0.0;
  double ord_zero = 0.0;    // |xi_eta| <= |xi|
  double ord_one = 0.0;     // |xi_eta'| <= |xi|/s + (1 + 2 eta |xi|) / (s^2 f'')
  double ord_two = 0.0;     // |xi_eta'' f'' s^2| <= 2 eta |xi_eta'| + (1 + 2 eta |xi|) |f'''/f'' + 1/s|
  double power_zero = 0.0;  // |xi_eta| <= kappa s^(1-alpha)
  double power_one = 0.0;   // |xi_eta'| <= (1+alpha) kappa s^-alpha + 2 eta alpha kappa^2 s^(1-2 alpha)
  double power_two = 0.0;   // |xi_eta'' f'' s^2| <= (kappa+1)/s + 2 eta kappa (2+alpha+kappa) s^-alpha
                            //                      + 4 alpha eta^2 kappa^2 s^(1-2 alpha)
  bool pass_ord = false;
  bool pass_power = false;  // vacuously true when the power family does not apply
};

struct XiBoundReport {
  std::vector<XiBoundSample> samples;
  double worst_ord_zero = 0.0;
  double worst_ord_one = 0.0;
  double worst_ord_two = 0.0;
  double worst_power_zero = 0.0;
  double worst_power_one = 0.0;
  double worst_power_two = 0.0;
  bool power_family_applicable = false;
  bool all_ord_pass = false;
  bool all_power_pass = false;
};

class XiEvaluator {
 public:
  // eta must lie in [0, 1]. quad_tol is the relative tolerance of every
  // quadrature stage. tail_cutoff is the exponent beyond which the kernel
  // exp(-(E(y) - E(s))) is treated as zero; the remaining algebraic tail is
  // truncated where a growth bound certifies the discarded mass below
  // quad_tol. Construction precomputes the exponent table for eta > 0.
  explicit XiEvaluator(PressureLaw law, double eta, double quad_tol = 1e-10,
                       double tail_cutoff = 60.0);
  ~XiEvaluator();

  XiEvaluator(XiEvaluator&&) noexcept;
  XiEvaluator& operator=(XiEvaluator&&) noexcept;
  XiEvaluator(const XiEvaluator&) = delete;
  XiEvaluator& operator=(const XiEvaluator&) = delete;

  const PressureLaw& law() const { return law_; }
  double eta() const { return eta_; }
  double quad_tol() const { return quad_tol_; }
  double tail_cutoff() const { return tail_cutoff_; }

  // Closed form for the built-in laws, quadrature for custom ones.
  double xi(double s) const;

  // Tail quadrature of the defining integral for any law; the oracle against
  // which the closed forms are checked.
  double xi_quadrature(double s) const;

  // Production path: closed-form constant -1/(lambda + 2 eta) for the
  // logarithmic law; otherwise the exponent under the integral comes from the
  // precomputed table while the exponent at s itself is evaluated exactly so
  // the result is smooth enough for finite-difference probing.
  double xi_eta(double s) const;

  // Oracle path: every exponent is a fresh quadrature, bypassing the table.
  double xi_eta_direct(double s) const;

  // First derivative via the defining ODE rearranged for xi_eta'.
  double xi_eta_prime(double s) const;

  // Second derivative via the differentiated ODE.
  double xi_eta_second(double s) const;

  // xi_eta'(s) s^2 f''(s) - xi_eta(s) (2 eta + s f''(s)) - 1, with xi_eta'
  // recomputed by central finite differences of xi_eta so the check does not
  // reuse the rearranged formula. Magnitude is FD truncation plus quadrature
  // and interpolation noise.
  double ode_residual(double s) const;

  // Evaluates the six bound inequalities at each sample.
  XiBoundReport verify_bounds(const std::vector<double>& s_samples) const;

 private:
  struct ExponentCache;
  enum class KernelMode { none, table, direct };

  double exponent_exact(double s) const;
  double exponent_table(double y) const;
  double certified_lower_u(double s) const;
  double outer_integral(double s, KernelMode mode) const;

  PressureLaw law_;
  double eta_;
  double quad_tol_;
  double tail_cutoff_;
  std::unique_ptr<ExponentCache> cache_;
};

}  // namespace crossdiff
