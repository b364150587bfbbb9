#include "sphot/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sphot/special.hpp"

namespace sphot::models {

namespace {

struct AngularCtx {
  int d;
  double kappa;
  const std::function<double(double)>* f;
};

// Colatitude integrand: w(tau) = h(-cos tau) * sin^{d-2}(tau), with the vMF
// exponential rescaled by e^{-kappa} so values stay in [0, 1].
double colat_integrand(double tau, const void* raw) {
  const auto* ctx = static_cast<const AngularCtx*>(raw);
  const double s = -std::cos(tau);
  double w = std::pow(std::sin(tau), ctx->d - 2);
  if (ctx->f != nullptr)
    w *= (*ctx->f)(s);
  else
    w *= std::exp(ctx->kappa * (s - 1.0));
  return w;
}

constexpr double kQuadTol = 1e-12;

}  // namespace

LatitudeCdf::LatitudeCdf(Kind k, int d, double kappa, std::function<double(double)> f)
    : kind_(k), d_(d), kappa_(kappa), f_(std::move(f)) {
  if (d_ < 2) throw std::invalid_argument("LatitudeCdf: d must be >= 2");
  if (kappa_ < 0.0) throw std::invalid_argument("LatitudeCdf: kappa must be >= 0");
  norm_ = raw_mass(1.0);
  if (!(norm_ > 0.0)) throw std::invalid_argument("LatitudeCdf: degenerate angular mass");
}

LatitudeCdf LatitudeCdf::uniform(int d) { return LatitudeCdf(Kind::kUniform, d, 0.0, nullptr); }

LatitudeCdf LatitudeCdf::vmf(double kappa, int d) {
  return LatitudeCdf(Kind::kVmf, d, kappa, nullptr);
}

LatitudeCdf LatitudeCdf::from_angular_density(std::function<double(double)> f, int d) {
  return LatitudeCdf(Kind::kCustom, d, 0.0, std::move(f));
}

double LatitudeCdf::raw_mass(double u) const {
  const double theta = std::acos(std::clamp(-u, -1.0, 1.0));
  AngularCtx ctx{d_, kind_ == Kind::kVmf ? kappa_ : 0.0,
                 kind_ == Kind::kCustom ? &f_ : nullptr};
  return special::integrate(colat_integrand, &ctx, 0.0, theta, kQuadTol);
}

double LatitudeCdf::cdf(double u) const {
  if (u < -1.0 || u > 1.0) throw std::invalid_argument("LatitudeCdf::cdf: u outside [-1, 1]");
  switch (kind_) {
    case Kind::kUniform:
      if (d_ == 2) return 1.0 - std::acos(std::clamp(u, -1.0, 1.0)) / M_PI;
      if (d_ == 3) return 0.5 * (u + 1.0);
      break;
    case Kind::kVmf: {
      if (kappa_ < 1e-12) return uniform(d_).cdf(u);
      if (d_ == 3) {
        const double e2 = std::exp(-2.0 * kappa_);
        return (std::exp(kappa_ * (u - 1.0)) - e2) / (1.0 - e2);
      }
      break;
    }
    case Kind::kCustom:
      break;
  }
  return std::clamp(raw_mass(u) / norm_, 0.0, 1.0);
}

double LatitudeCdf::inverse(double p) const {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("LatitudeCdf::inverse: p outside [0, 1]");
  switch (kind_) {
    case Kind::kUniform:
      if (d_ == 2) return std::cos(M_PI * (1.0 - p));
      if (d_ == 3) return 2.0 * p - 1.0;
      break;
    case Kind::kVmf:
      if (kappa_ < 1e-12) return uniform(d_).inverse(p);
      if (d_ == 3) {
        const double e2 = std::exp(-2.0 * kappa_);
        return 1.0 + std::log(p + (1.0 - p) * e2) / kappa_;
      }
      break;
    case Kind::kCustom:
      break;
  }
  double lo = -1.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double f_star(double u, int d) { return LatitudeCdf::uniform(d).cdf(u); }
double q_star(double p, int d) { return LatitudeCdf::uniform(d).inverse(p); }
double g_kappa_cdf(double t, double kappa, int d) { return LatitudeCdf::vmf(kappa, d).cdf(t); }
double g_kappa_inv(double p, double kappa, int d) { return LatitudeCdf::vmf(kappa, d).inverse(p); }

namespace {

std::vector<double> gaussian_vector(int d, Rng& rng) {
  std::vector<double> x(static_cast<std::size_t>(d));
  for (auto& xi : x) xi = rng.normal();
  return x;
}

// Unit vector uniform on S^{k-1}, k >= 1 (k = 1 gives a random sign).
std::vector<double> uniform_direction(int k, Rng& rng) {
  for (;;) {
    auto x = gaussian_vector(k, rng);
    const double r = norm(x);
    if (r > 1e-12) {
      for (auto& xi : x) xi /= r;
      return x;
    }
  }
}

// Ulrich-Wood envelope rejection for the vMF latitude W on [-1, 1].
double wood_latitude(double kappa, int d, Rng& rng) {
  const double dm1 = d - 1.0;
  const double b = dm1 / (std::sqrt(4.0 * kappa * kappa + dm1 * dm1) + 2.0 * kappa);
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + dm1 * std::log(1.0 - x0 * x0);
  for (;;) {
    const double z = rng.beta(0.5 * dm1, 0.5 * dm1);
    const double u = rng.uniform01();
    const double w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    if (kappa * w + dm1 * std::log(1.0 - x0 * w) - c >= std::log(u)) return w;
  }
}

UnitVector compose_tangent_normal(const UnitVector& pole, const ComplementBasis& basis,
                                  double latitude, std::span<const double> equatorial) {
  const int d = pole.dim();
  const double w = std::clamp(latitude, -1.0, 1.0);
  const double r = std::sqrt(std::max(0.0, 1.0 - w * w));
  auto tan_part = basis.apply(equatorial);
  std::vector<double> z(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) z[static_cast<std::size_t>(k)] = w * pole[static_cast<std::size_t>(k)] + r * tan_part[static_cast<std::size_t>(k)];
  return UnitVector(std::move(z));
}

}  // namespace

Sample sample_uniform(int n, int d, Rng& rng) {
  if (n < 0 || d < 2) throw std::invalid_argument("sample_uniform: bad arguments");
  Sample out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.emplace_back(uniform_direction(d, rng));
  return out;
}

Sample sample_vmf(int n, const VmfParams& params, Rng& rng) {
  if (params.kappa < 0.0) throw std::invalid_argument("sample_vmf: kappa must be >= 0");
  const int d = params.theta.dim();
  const ComplementBasis basis(params.theta);
  Sample out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double w = wood_latitude(params.kappa, d, rng);
    const auto xi = uniform_direction(d - 1, rng);
    out.push_back(compose_tangent_normal(params.theta, basis, w, xi));
  }
  return out;
}

Sample sample_tangent_vmf(int n, const TangentVmfParams& params, Rng& rng) {
  const int d = params.theta.dim();
  if (d < 3) throw std::invalid_argument("sample_tangent_vmf: needs d >= 3");
  if (static_cast<int>(params.mu.size()) != d - 1)
    throw std::invalid_argument("sample_tangent_vmf: mu must live in dimension d-1");
  if (!(params.beta_a > 0.0) || !(params.beta_b > 0.0))
    throw std::invalid_argument("sample_tangent_vmf: Beta parameters must be positive");
  const ComplementBasis basis(params.theta);
  const VmfParams eq{UnitVector(params.mu), params.kappa};
  Sample out;
  out.reserve(static_cast<std::size_t>(n));
  Rng& r = rng;
  for (int i = 0; i < n; ++i) {
    const double v = 2.0 * r.beta(params.beta_a, params.beta_b) - 1.0;
    const auto u = sample_vmf(1, eq, r);  // on S^{d-2}
    out.push_back(compose_tangent_normal(params.theta, basis, v, u[0].span()));
  }
  return out;
}

Sample sample_sine_skew(int n, const SineSkewParams& params, Rng& rng) {
  if (!(std::abs(params.lambda) < 1.0))
    throw std::invalid_argument("sample_sine_skew: |lambda| must be < 1");
  if (params.base_kappa < 0.0) throw std::invalid_argument("sample_sine_skew: kappa must be >= 0");
  // Inversion table for the symmetric vMF base on [-pi, pi): cumulative
  // trapezoid on a fine mesh, then linear interpolation of the inverse.
  constexpr int kCells = 8192;
  std::vector<double> cum(kCells + 1, 0.0);
  const double h = 2.0 * M_PI / kCells;
  double prev = std::exp(params.base_kappa * (std::cos(-M_PI) - 1.0));
  for (int k = 1; k <= kCells; ++k) {
    const double phi = -M_PI + h * k;
    const double cur = std::exp(params.base_kappa * (std::cos(phi) - 1.0));
    cum[static_cast<std::size_t>(k)] = cum[static_cast<std::size_t>(k) - 1] + 0.5 * h * (prev + cur);
    prev = cur;
  }
  const double total = cum.back();

  Sample out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double target = rng.uniform01() * total;
    const auto it = std::lower_bound(cum.begin(), cum.end(), target);
    const std::size_t k = it == cum.begin() ? 1 : static_cast<std::size_t>(it - cum.begin());
    const double c0 = cum[k - 1], c1 = cum[k];
    const double frac = c1 > c0 ? (target - c0) / (c1 - c0) : 0.5;
    double phi0 = -M_PI + h * (static_cast<double>(k - 1) + frac);
    // Sine-skew flip: keep phi0 with probability (1 + lambda sin phi0)/2.
    if (rng.uniform01() >= 0.5 * (1.0 + params.lambda * std::sin(phi0))) phi0 = -phi0;
    double phi = phi0 + params.mu;
    phi = std::remainder(phi, 2.0 * M_PI);
    out.push_back(UnitVector({std::cos(phi), std::sin(phi)}));
  }
  return out;
}

MixtureParams vmf_mixture(const std::vector<double>& weights,
                          const std::vector<VmfParams>& components) {
  MixtureParams mix;
  mix.weights = weights;
  for (const auto& c : components)
    mix.draw.push_back([c](Rng& rng) { return sample_vmf(1, c, rng)[0]; });
  return mix;
}

Sample sample_mixture(int n, const MixtureParams& params, Rng& rng) {
  if (params.weights.size() != params.draw.size() || params.weights.empty())
    throw std::invalid_argument("sample_mixture: malformed components");
  double total = 0.0;
  for (double w : params.weights) {
    if (w < 0.0) throw std::invalid_argument("sample_mixture: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("sample_mixture: weights must sum to 1");
  Sample out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    double acc = 0.0;
    std::size_t pick = params.weights.size() - 1;
    for (std::size_t k = 0; k < params.weights.size(); ++k) {
      acc += params.weights[k];
      if (u < acc) {
        pick = k;
        break;
      }
    }
    out.push_back(params.draw[pick](rng));
  }
  return out;
}

double vmf_mean_resultant(double kappa, int d) {
  if (kappa < 1e-12) return 0.0;
  if (d == 3) return 1.0 / std::tanh(kappa) - 1.0 / kappa;
  // Bessel ratio I_{d/2}(x) / I_{d/2-1}(x) by backward recurrence.
  const double nu = 0.5 * d;
  const int depth = 64 + static_cast<int>(2.0 * kappa);
  double r = 0.0;
  for (int k = depth; k >= 0; --k) r = kappa / (2.0 * (nu + k) + kappa * r);
  return r;
}

double vmf_kappa_mle(const Sample& sample) {
  if (sample.size() < 2) throw std::invalid_argument("vmf_kappa_mle: needs n >= 2");
  const int d = sample.front().dim();
  std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
  for (const auto& z : sample)
    for (int k = 0; k < d; ++k) mean[static_cast<std::size_t>(k)] += z[static_cast<std::size_t>(k)];
  for (auto& m : mean) m /= static_cast<double>(sample.size());
  const double rbar = norm(mean);
  if (rbar <= 1e-8) return 0.0;
  if (rbar >= 1.0 - 1e-12) throw std::runtime_error("vmf_kappa_mle: degenerate concentration");
  double kappa = rbar * (d - rbar * rbar) / (1.0 - rbar * rbar);
  for (int it = 0; it < 100; ++it) {
    const double a = vmf_mean_resultant(kappa, d);
    const double resid = a - rbar;
    if (std::abs(resid) < 1e-13) break;
    const double da = 1.0 - a * a - (d - 1.0) * a / kappa;
    double next = kappa - resid / da;
    if (!(next > 0.0)) next = 0.5 * kappa;
    kappa = next;
  }
  return kappa;
}

namespace {

double mean_sq_geodesic(const Sample& sample, const UnitVector& z) {
  double s = 0.0;
  for (const auto& x : sample) s += transport_cost(x, z);
  return s / static_cast<double>(sample.size());
}

UnitVector descend(const Sample& sample, UnitVector z) {
  const int d = z.dim();
  for (int it = 0; it < 200; ++it) {
    std::vector<double> t(static_cast<std::size_t>(d), 0.0);
    for (const auto& x : sample) {
      const double c = std::clamp(dot(x.span(), z.span()), -1.0, 1.0);
      const double dist = std::acos(c);
      // Unit tangent at z toward x; undefined at antipodes, which carry no
      // usable direction and are skipped.
      std::vector<double> dir(static_cast<std::size_t>(d));
      for (int k = 0; k < d; ++k) dir[static_cast<std::size_t>(k)] = x[static_cast<std::size_t>(k)] - c * z[static_cast<std::size_t>(k)];
      const double r = norm(dir);
      if (r < 1e-14) continue;
      for (int k = 0; k < d; ++k) t[static_cast<std::size_t>(k)] += dist * dir[static_cast<std::size_t>(k)] / r;
    }
    for (auto& tk : t) tk /= static_cast<double>(sample.size());
    const double step = norm(t);
    if (step < 1e-10) break;
    std::vector<double> nz(static_cast<std::size_t>(d));
    const double cs = std::cos(step), sn = std::sin(step);
    for (int k = 0; k < d; ++k) nz[static_cast<std::size_t>(k)] = cs * z[static_cast<std::size_t>(k)] + sn * t[static_cast<std::size_t>(k)] / step;
    z = UnitVector(std::move(nz));
  }
  return z;
}

}  // namespace

UnitVector frechet_mean(const Sample& sample) {
  if (sample.empty()) throw std::invalid_argument("frechet_mean: empty sample");
  const int d = sample.front().dim();

  std::vector<UnitVector> starts;
  {
    std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
    for (const auto& z : sample)
      for (int k = 0; k < d; ++k) mean[static_cast<std::size_t>(k)] += z[static_cast<std::size_t>(k)];
    const double r = norm(mean);
    if (r > 1e-9) {
      for (auto& m : mean) m /= r;
      starts.emplace_back(std::move(mean));
    } else {
      starts.push_back(sample.front());
    }
    for (int k = 0; k < 4; ++k) {
      Rng rng(derive_seed(0x46524543u, "frechet-start", static_cast<std::uint64_t>(k)));
      starts.emplace_back(uniform_direction(d, rng));
    }
  }

  UnitVector best = starts.front();
  double best_obj = std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    UnitVector cand = descend(sample, s);
    const double obj = mean_sq_geodesic(sample, cand);
    if (obj < best_obj - 1e-15) {
      best_obj = obj;
      best = cand;
    }
  }
  return best;
}

UnitVector rotsym_transport(const UnitVector& z, const UnitVector& theta,
                            const LatitudeCdf& latitude_cdf) {
  const int d = z.dim();
  const auto td = tangent_decompose(z, theta);
  const double g = q_star(latitude_cdf.cdf(td.latitude), d);
  const double r = std::sqrt(std::max(0.0, 1.0 - g * g));
  std::vector<double> out(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) out[static_cast<std::size_t>(k)] = g * theta[static_cast<std::size_t>(k)] + r * td.sign[static_cast<std::size_t>(k)];
  return UnitVector(std::move(out));
}

}  // namespace sphot::models
