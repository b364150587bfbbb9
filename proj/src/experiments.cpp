#include "sphot/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sphot/gof.hpp"
#include "sphot/manova.hpp"
#include "sphot/parallel.hpp"
#include "sphot/transport.hpp"

namespace sphot::experiments {

namespace {

UnitVector uv(std::vector<double> v) { return UnitVector(std::move(v)); }

// Compact numeric tag for labels and stream names ("0.05", "2").
std::string io_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

DgpSpec uniform_dgp(int d) {
  return {"uniform", d, [d](int n, Rng& rng) { return models::sample_uniform(n, d, rng); }};
}

DgpSpec vmf_dgp(const std::string& label, UnitVector theta, double kappa) {
  const int d = theta.dim();
  models::VmfParams p{std::move(theta), kappa};
  return {label, d, [p](int n, Rng& rng) { return models::sample_vmf(n, p, rng); }};
}

}  // namespace

std::vector<DgpSpec> table1_dgps() {
  std::vector<DgpSpec> rows;
  rows.push_back(uniform_dgp(3));
  for (double k : {0.05, 0.1, 0.5})
    rows.push_back(vmf_dgp("vmf(kappa=" + io_label(k) + ")", uv({0, 0, 1}), k));
  for (double k : {0.05, 0.1, 0.2}) {
    // Tangent vMF with uniform angular distribution: V ~ F_* on [-1, 1] for
    // d = 3, i.e. V = 2 Beta(1, 1) - 1.
    models::TangentVmfParams p{uv({0, 0, 1}), {0.0, 1.0}, k, 1.0, 1.0};
    rows.push_back({"tangent-vmf(kappa=" + io_label(k) + ")", 3,
                    [p](int n, Rng& rng) { return models::sample_tangent_vmf(n, p, rng); }});
  }
  const std::vector<double> t1 = {0.0, -0.3, std::sqrt(0.91)};
  const std::vector<double> t2 = {0.3, std::sqrt(0.66), 0.5};
  for (double k : {0.1, 0.2, 0.3}) {
    auto mix = models::vmf_mixture({0.5, 0.5}, {{uv(t1), k}, {uv(t2), k}});
    rows.push_back({"mix2-vmf(kappa=" + io_label(k) + ")", 3,
                    [mix](int n, Rng& rng) { return models::sample_mixture(n, mix, rng); }});
  }
  for (double k : {0.07, 0.1, 0.2}) {
    models::TangentVmfParams tang{uv({0, 0, 1}), {0.0, 1.0}, k, 1.0, 1.0};
    models::MixtureParams mix;
    mix.weights = {0.5, 0.25, 0.25};
    mix.draw.push_back([tang](Rng& rng) { return models::sample_tangent_vmf(1, tang, rng)[0]; });
    models::VmfParams p2{uv(t1), k}, p3{uv(t2), k};
    mix.draw.push_back([p2](Rng& rng) { return models::sample_vmf(1, p2, rng)[0]; });
    mix.draw.push_back([p3](Rng& rng) { return models::sample_vmf(1, p3, rng)[0]; });
    rows.push_back({"mix2-vmf+tangent(kappa=" + io_label(k) + ")", 3,
                    [mix](int n, Rng& rng) { return models::sample_mixture(n, mix, rng); }});
  }
  return rows;
}

std::vector<DgpSpec> table2_dgps() {
  std::vector<DgpSpec> rows;
  rows.push_back(uniform_dgp(2));
  for (double k : {0.05, 0.1, 0.5})
    rows.push_back(vmf_dgp("vmf(kappa=" + io_label(k) + ")", uv({0, 1}), k));
  const std::vector<double> t1 = {-0.3, std::sqrt(0.91)};
  const std::vector<double> t2 = {0.6, 0.8};
  for (double k : {0.1, 0.25, 0.5}) {
    auto mix = models::vmf_mixture({0.7, 0.3}, {{uv(t1), k}, {uv(t2), k}});
    rows.push_back({"mix2-vmf(kappa=" + io_label(k) + ")", 2,
                    [mix](int n, Rng& rng) { return models::sample_mixture(n, mix, rng); }});
  }
  for (double l : {0.1, 0.3, 0.35}) {
    models::SineSkewParams p{0.0, l, 0.1};
    rows.push_back({"sine-skew(lambda=" + io_label(l) + ")", 2,
                    [p](int n, Rng& rng) { return models::sample_sine_skew(n, p, rng); }});
  }
  return rows;
}

std::vector<RateRow> gof_rejection_rates(const std::vector<DgpSpec>& dgps, int n, int n_reps,
                                         int n_mc, std::uint64_t seed, unsigned threads) {
  if (dgps.empty()) return {};
  const int d = dgps.front().d;
  for (const auto& dgp : dgps)
    if (dgp.d != d) throw std::invalid_argument("gof_rejection_rates: mixed dimensions");
  const auto shape = grids::auto_shape(n, d);
  const double critical =
      gof::mc_critical_value(n, d, shape, 0.05, n_mc, seed, threads);

  std::vector<RateRow> out;
  const auto id = gof::identity_transport();
  for (std::size_t row = 0; row < dgps.size(); ++row) {
    const auto& dgp = dgps[row];
    std::atomic<int> reject_ot{0}, reject_rayleigh{0};
    parallel_for(static_cast<std::size_t>(n_reps), threads, [&](std::size_t b) {
      Rng rng(derive_seed(seed, "gof-" + dgp.label, b));
      const Sample z = dgp.draw(n, rng);
      const double t = gof::cvm_statistic(z, id, shape.n_R, shape.n_S, shape.n_0,
                                          derive_seed(seed, "gof-fit-" + dgp.label, b));
      if (t > critical) ++reject_ot;
      if (gof::rayleigh_test(z, 0.05).reject) ++reject_rayleigh;
    });
    out.push_back({dgp.label, "ot-cvm", reject_ot / static_cast<double>(n_reps), n_reps, seed});
    out.push_back({dgp.label, "rayleigh", reject_rayleigh / static_cast<double>(n_reps), n_reps, seed});
  }
  return out;
}

TwoSampleDgp manova_case(int case_id, double xi) {
  const UnitVector theta = uv({1, 0, 0});
  switch (case_id) {
    case 1: {
      const UnitVector theta2 = rotate(rotation_z(xi), theta);
      models::VmfParams p1{theta, 3.0}, p2{theta2, 3.0};
      return {[p1](int n, Rng& rng) { return models::sample_vmf(n, p1, rng); },
              [p2](int n, Rng& rng) { return models::sample_vmf(n, p2, rng); }};
    }
    case 2: {
      models::VmfParams p1{theta, 3.0}, p2{theta, 3.0 + xi};
      return {[p1](int n, Rng& rng) { return models::sample_vmf(n, p1, rng); },
              [p2](int n, Rng& rng) { return models::sample_vmf(n, p2, rng); }};
    }
    case 3: {
      auto mix = models::vmf_mixture(
          {3.0 / 8.0, 3.0 / 8.0, 0.25},
          {{uv({1, 0, 0}), 3.0},
           {uv({-0.8, 0.3, std::sqrt(0.27)}), 2.0},
           {uv({0, -0.7, std::sqrt(0.51)}), 3.0}});
      const Matrix3 rot = rotation_z(xi);
      return {[mix](int n, Rng& rng) { return models::sample_mixture(n, mix, rng); },
              [mix, rot](int n, Rng& rng) {
                Sample z = models::sample_mixture(n, mix, rng);
                for (auto& p : z) p = rotate(rot, p);
                return z;
              }};
    }
    case 4: {
      models::TangentVmfParams p1{uv({0, 0, 1}), {0.7, std::sqrt(0.51)}, 1.0, 2.0, 5.0};
      models::TangentVmfParams p2 = p1;
      p2.beta_b = 5.0 + xi;
      return {[p1](int n, Rng& rng) { return models::sample_tangent_vmf(n, p1, rng); },
              [p2](int n, Rng& rng) { return models::sample_tangent_vmf(n, p2, rng); }};
    }
    default:
      throw std::invalid_argument("manova_case: case must be 1..4");
  }
}

std::vector<double> manova_case_xis(int case_id) {
  switch (case_id) {
    case 1: return {0.0, 0.2, 0.4, 0.6, 0.8};
    case 2: return {0.0, 0.5, 1.0, 1.5, 2.0};
    case 3: return {0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
    case 4: return {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    default: throw std::invalid_argument("manova_case_xis: case must be 1..4");
  }
}

std::vector<PowerRow> manova_rejection_rates(int case_id, const std::vector<double>& xis,
                                             int n_reps, std::uint64_t seed, unsigned threads,
                                             int n1, int n2) {
  constexpr int kNR = 44, kNS = 25, kN0 = 0;
  const int n = n1 + n2;
  if (n != kNR * kNS + kN0)
    throw std::invalid_argument("manova_rejection_rates: group sizes must total 1100");

  using manova::ScoreKind;
  const std::vector<ScoreKind> kinds = {
      ScoreKind::kUniform, ScoreKind::kVmfLocation, ScoreKind::kVmfConcentration,
      ScoreKind::kVmfLocationConcentration};

  std::vector<PowerRow> out;
  for (double xi : xis) {
    const TwoSampleDgp dgp = manova_case(case_id, xi);
    std::vector<std::atomic<int>> rejects(kinds.size() + 1);
    for (auto& r : rejects) r = 0;
    parallel_for(static_cast<std::size_t>(n_reps), threads, [&](std::size_t b) {
      const std::string tag = "manova-c" + std::to_string(case_id) + "-" + io_label(xi);
      Rng rng(derive_seed(seed, tag, b));
      manova::PooledSample pooled;
      pooled.groups.push_back(dgp.group1(n1, rng));
      pooled.groups.push_back(dgp.group2(n2, rng));
      const Sample y = pooled.pooled();
      const auto fit = transport::fit(y, kNR, kNS, kN0, derive_seed(seed, tag + "-fit", b));
      const double kappa_hat = models::vmf_kappa_mle(y);
      const auto sizes = pooled.sizes();
      for (std::size_t s = 0; s < kinds.size(); ++s) {
        const auto rep = manova::q_statistic_with_fit(fit, sizes, kinds[s], kappa_hat, 0.05);
        if (rep.reject) ++rejects[s];
      }
      if (manova::pvmf_test(pooled, 0.05).reject) ++rejects[kinds.size()];
    });
    for (std::size_t s = 0; s < kinds.size(); ++s)
      out.push_back({xi, manova::score_name(kinds[s]),
                     rejects[s] / static_cast<double>(n_reps), n_reps, seed});
    out.push_back({xi, "pvmf", rejects[kinds.size()] / static_cast<double>(n_reps), n_reps, seed});
  }
  return out;
}

}  // namespace sphot::experiments
