#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sphot/grids.hpp"
#include "sphot/models.hpp"
#include "sphot/transport.hpp"

namespace sphot::gof {

struct GofReport {
  std::string method;
  double statistic = 0.0;
  double critical_value = 0.0;
  double p_value = 1.0;
  double alpha = 0.05;
  int n_mc = 0;
  std::uint64_t seed = 0;
  bool reject = false;
};

using NullTransport = std::function<UnitVector(const UnitVector&)>;

/// The identity map: null transport of the uniform distribution.
NullTransport identity_transport();

/// Null transport of a rotationally symmetric law with known angular CDF.
NullTransport rotsym_null(const UnitVector& theta, models::LatitudeCdf latitude_cdf);

/// Cramér-von Mises statistic T_n = n^{-1} sum ||F^(n)(Z_i) - F_0(Z_i)||^2,
/// computed from the structured two-step fit.  Always in [0, 4].
double cvm_statistic(const Sample& sample, const NullTransport& null_transport, int n_R,
                     int n_S, int n_0, std::uint64_t seed);

/// Null draws of T_n over n_mc uniform samples (independent streams per
/// replication, merged by stream index).
std::vector<double> mc_null_draws(int n, int d, grids::GridShape shape, int n_mc,
                                  std::uint64_t seed, unsigned threads = 0);

/// (1-alpha) empirical quantile of the Monte Carlo null draws.
double mc_critical_value(int n, int d, grids::GridShape shape, double alpha, int n_mc,
                         std::uint64_t seed, unsigned threads = 0);

double critical_from_draws(std::vector<double> draws, double alpha);
double p_value_from_draws(const std::vector<double>& draws, double statistic);

/// Monte Carlo calibrated test of uniformity (exact size by construction).
GofReport test_uniformity(const Sample& sample, double alpha, int n_mc, std::uint64_t seed,
                          unsigned threads = 0);

/// Rayleigh baseline: n d ||mean||^2 against chi-square with d degrees of
/// freedom.
GofReport rayleigh_test(const Sample& sample, double alpha);

}  // namespace sphot::gof
