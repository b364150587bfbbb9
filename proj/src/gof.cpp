#include "sphot/gof.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sphot/parallel.hpp"
#include "sphot/rng.hpp"
#include "sphot/special.hpp"

namespace sphot::gof {

NullTransport identity_transport() {
  return [](const UnitVector& z) { return z; };
}

NullTransport rotsym_null(const UnitVector& theta, models::LatitudeCdf latitude_cdf) {
  return [theta, cdf = std::move(latitude_cdf)](const UnitVector& z) {
    return models::rotsym_transport(z, theta, cdf);
  };
}

double cvm_statistic(const Sample& sample, const NullTransport& null_transport, int n_R,
                     int n_S, int n_0, std::uint64_t seed) {
  const auto t = transport::fit(sample, n_R, n_S, n_0, seed);
  const int n = t.size();
  const int d = t.dim();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const UnitVector f0 = null_transport(sample[static_cast<std::size_t>(i)]);
    const UnitVector& fn = t.image(i);
    double sq = 0.0;
    for (int k = 0; k < d; ++k) {
      const double diff = fn[static_cast<std::size_t>(k)] - f0[static_cast<std::size_t>(k)];
      sq += diff * diff;
    }
    acc += sq;
  }
  return acc / n;
}

std::vector<double> mc_null_draws(int n, int d, grids::GridShape shape, int n_mc,
                                  std::uint64_t seed, unsigned threads) {
  if (n_mc < 100) throw std::invalid_argument("mc_null_draws: n_mc must be >= 100");
  std::vector<double> draws(static_cast<std::size_t>(n_mc));
  const NullTransport id = identity_transport();
  parallel_for(static_cast<std::size_t>(n_mc), threads, [&](std::size_t b) {
    Rng rng(derive_seed(seed, "gof-mc", b));
    const Sample z = models::sample_uniform(n, d, rng);
    draws[b] = cvm_statistic(z, id, shape.n_R, shape.n_S, shape.n_0,
                             derive_seed(seed, "gof-mc-fit", b));
  });
  return draws;
}

double critical_from_draws(std::vector<double> draws, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) throw std::invalid_argument("invalid alpha");
  const int b = static_cast<int>(draws.size());
  int k = static_cast<int>(std::ceil((1.0 - alpha) * (b + 1)));
  k = std::clamp(k, 1, b);
  std::nth_element(draws.begin(), draws.begin() + (k - 1), draws.end());
  return draws[static_cast<std::size_t>(k) - 1];
}

double p_value_from_draws(const std::vector<double>& draws, double statistic) {
  int count = 0;
  for (double t : draws)
    if (t >= statistic) ++count;
  return (1.0 + count) / (static_cast<double>(draws.size()) + 1.0);
}

double mc_critical_value(int n, int d, grids::GridShape shape, double alpha, int n_mc,
                         std::uint64_t seed, unsigned threads) {
  return critical_from_draws(mc_null_draws(n, d, shape, n_mc, seed, threads), alpha);
}

GofReport test_uniformity(const Sample& sample, double alpha, int n_mc, std::uint64_t seed,
                          unsigned threads) {
  if (sample.empty()) throw std::invalid_argument("test_uniformity: empty sample");
  const int n = static_cast<int>(sample.size());
  const int d = sample.front().dim();
  const auto shape = grids::auto_shape(n, d);
  const auto draws = mc_null_draws(n, d, shape, n_mc, seed, threads);
  GofReport rep;
  rep.method = "cvm-uniformity";
  rep.alpha = alpha;
  rep.n_mc = n_mc;
  rep.seed = seed;
  rep.statistic = cvm_statistic(sample, identity_transport(), shape.n_R, shape.n_S, shape.n_0,
                                derive_seed(seed, "gof-obs-fit"));
  rep.critical_value = critical_from_draws(draws, alpha);
  rep.p_value = p_value_from_draws(draws, rep.statistic);
  rep.reject = rep.statistic > rep.critical_value;
  return rep;
}

GofReport rayleigh_test(const Sample& sample, double alpha) {
  if (sample.size() < 2) throw std::invalid_argument("rayleigh_test: needs n >= 2");
  const int n = static_cast<int>(sample.size());
  const int d = sample.front().dim();
  std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
  for (const auto& z : sample)
    for (int k = 0; k < d; ++k) mean[static_cast<std::size_t>(k)] += z[static_cast<std::size_t>(k)];
  for (auto& m : mean) m /= n;
  const double r2 = dot(mean, mean);
  GofReport rep;
  rep.method = "rayleigh";
  rep.alpha = alpha;
  rep.statistic = n * d * r2;
  rep.critical_value = special::chi2_quantile(1.0 - alpha, d);
  rep.p_value = special::chi2_sf(rep.statistic, d);
  rep.reject = rep.statistic > rep.critical_value;
  return rep;
}

}  // namespace sphot::gof
