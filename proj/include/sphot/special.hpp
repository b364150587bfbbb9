#pragma once

namespace sphot::special {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

double chi2_cdf(double x, int df);
double chi2_sf(double x, int df);

/// Inverse chi-square CDF: smallest x with P(df/2, x/2) = p, p in (0, 1).
/// Bracketing plus Newton refinement, 1e-10 relative accuracy.
double chi2_quantile(double p, int df);

/// Adaptive Simpson quadrature on [a, b] to absolute tolerance tol.
double integrate(double (*f)(double, const void*), const void* ctx, double a, double b,
                 double tol);

}  // namespace sphot::special
