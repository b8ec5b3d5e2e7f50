#pragma once

#include <functional>

namespace vcs {

/// Regularized lower/upper incomplete gamma P(a,x), Q(a,x) = 1 - P(a,x).
/// Series for x < a+1, Lentz continued fraction otherwise; ~1e-14 relative.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

/// P(chi^2_b > t2) = Q(b/2, t2/2).
double chi_squared_tail(double b, double t2);

/// chi^2_b density at x (log-scale internally, safe for large b).
double chi_squared_pdf(double b, double x);

/// Adaptive Gauss-Kronrod (15-point) on [a,b] to a relative tolerance.
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double rel_tol = 1e-10, int max_depth = 40);

/// I(tau^2; b) = integral_{tau^2}^inf x^{b/2-1} e^{-x/2} dx, tau^2 >= 1.
/// Gamma identities for b > 0, adaptive quadrature for b <= 0. Throws
/// std::overflow_error when the raw value exceeds double range.
double incomplete_I(double tau_sq, double b);

}  // namespace vcs
