#pragma once

// Internal adaptive quadrature helpers (boost.math Gauss-Kronrod underneath).
// Not installed; core sources only.

#include <functional>

namespace crossdiff::detail {

// Adaptive Gauss-Kronrod integral of f over [a, b]. tol is absolute for O(1)
// integrals and relative for larger ones. Throws std::runtime_error if the error
// estimate cannot be brought under 10*tol*max(1, |integral|).
double integrate(const std::function<double(double)>& f, double a, double b, double tol);

// Same integral evaluated in t = log(y) coordinates: robust when [a, b] spans many
// decades (0 < a < b). The integrand is still f(y), not f(t).
double integrate_log(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace crossdiff::detail
