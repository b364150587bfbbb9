#include "sphot/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sphot::special {

namespace {

// Series expansion of P(a, x), effective for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), effective for x >= a + 1 (modified Lentz).
double gamma_q_cf(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_p: domain");
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: domain");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi2_cdf(double x, int df) {
  if (df < 1) throw std::invalid_argument("chi2_cdf: df must be >= 1");
  if (x <= 0.0) return 0.0;
  return gamma_p(0.5 * df, 0.5 * x);
}

double chi2_sf(double x, int df) {
  if (df < 1) throw std::invalid_argument("chi2_sf: df must be >= 1");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * df, 0.5 * x);
}

double chi2_quantile(double p, int df) {
  if (!(p > 0.0) || !(p < 1.0)) throw std::invalid_argument("chi2_quantile: p must be in (0,1)");
  if (df < 1) throw std::invalid_argument("chi2_quantile: df must be >= 1");
  // Bracket the root.
  double lo = 0.0, hi = df + 10.0 * std::sqrt(2.0 * df) + 10.0;
  while (chi2_cdf(hi, df) < p) hi *= 2.0;
  double x = 0.5 * (lo + hi);
  const double a = 0.5 * df;
  const double lg = std::lgamma(a);
  for (int it = 0; it < 200; ++it) {
    const double f = chi2_cdf(x, df) - p;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    // Newton step from the chi-square density, bisection fallback.
    const double logpdf = (a - 1.0) * std::log(0.5 * x) - 0.5 * x - lg - std::log(2.0);
    double nx = x - f / std::exp(logpdf);
    if (!(nx > lo) || !(nx < hi)) nx = 0.5 * (lo + hi);
    if (std::abs(nx - x) <= 1e-12 * std::abs(x)) return nx;
    x = nx;
  }
  return x;
}

namespace {

double simpson_est(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(double (*f)(double, const void*), const void* ctx, double a, double fa,
                double b, double fb, double m, double fm, double whole, double tol,
                int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm, ctx), frm = f(rm, ctx);
  const double left = simpson_est(a, fa, m, fm, flm);
  const double right = simpson_est(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive(f, ctx, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, ctx, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(double (*f)(double, const void*), const void* ctx, double a, double b,
                 double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a, ctx), fb = f(b, ctx), fm = f(m, ctx);
  const double whole = simpson_est(a, fa, b, fb, fm);
  return adaptive(f, ctx, a, fa, b, fb, m, fm, whole, tol, 48);
}

}  // namespace sphot::special
