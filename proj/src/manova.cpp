#include "sphot/manova.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sphot/special.hpp"

namespace sphot::manova {

Sample PooledSample::pooled() const {
  Sample out;
  for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
  return out;
}

std::vector<int> PooledSample::sizes() const {
  std::vector<int> s;
  for (const auto& g : groups) s.push_back(static_cast<int>(g.size()));
  return s;
}

int PooledSample::total() const {
  int n = 0;
  for (const auto& g : groups) n += static_cast<int>(g.size());
  return n;
}

int PooledSample::dim() const { return groups.front().front().dim(); }

void PooledSample::validate() const {
  if (groups.size() < 2) throw std::invalid_argument("PooledSample: needs m >= 2 groups");
  for (const auto& g : groups)
    if (g.size() < 2) throw std::invalid_argument("PooledSample: group too small (n_i < 2)");
  const int d = dim();
  for (const auto& g : groups)
    for (const auto& z : g)
      if (z.dim() != d) throw std::invalid_argument("PooledSample: mixed dimensions");
}

std::string score_name(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kUniform: return "uniform";
    case ScoreKind::kVmfLocation: return "vmf-location";
    case ScoreKind::kVmfConcentration: return "vmf-concentration";
    case ScoreKind::kVmfLocationConcentration: return "vmf-location-concentration";
  }
  return "unknown";
}

ScoreKind score_from_name(const std::string& name) {
  if (name == "uniform") return ScoreKind::kUniform;
  if (name == "vmf-location") return ScoreKind::kVmfLocation;
  if (name == "vmf-concentration") return ScoreKind::kVmfConcentration;
  if (name == "vmf-location-concentration") return ScoreKind::kVmfLocationConcentration;
  throw std::invalid_argument("unknown score: " + name);
}

ScoreFunction make_score(ScoreKind kind, const transport::EmpiricalTransport& t,
                         double kappa_hat) {
  const int d = t.dim();
  ScoreFunction s;
  s.kind = kind;
  s.d_J = kind == ScoreKind::kVmfConcentration ? 1 : d;
  s.kappa_hat = kappa_hat;
  if (kind != ScoreKind::kUniform) {
    const int n_R = t.grid().n_R();
    const auto cdf = models::LatitudeCdf::vmf(kappa_hat, d);
    s.g.resize(static_cast<std::size_t>(n_R) + 1);
    // Rank 0 belongs to pole copies; the inverse argument is clamped just
    // inside the boundary.
    s.g[0] = cdf.inverse(1.0 - 1e-12);
    for (int r = 1; r <= n_R; ++r)
      s.g[static_cast<std::size_t>(r)] = cdf.inverse(1.0 - static_cast<double>(r) / (n_R + 1));
  }
  return s;
}

std::vector<double> score_at(const grids::StructuredGrid& grid, int pos,
                             const ScoreFunction& score) {
  const int d = grid.dim();
  if (score.kind == ScoreKind::kUniform) return grid.points()[static_cast<std::size_t>(pos)].coords();
  const int rank = grid.rank_of(pos);
  const double g = score.g[static_cast<std::size_t>(rank)];
  const double root = std::sqrt(std::max(0.0, 1.0 - g * g));
  if (score.kind == ScoreKind::kVmfConcentration) return {g};
  const auto sign = grid.sign_of(pos);
  std::vector<double> out(static_cast<std::size_t>(d), 0.0);
  for (int k = 0; k < d; ++k) out[static_cast<std::size_t>(k)] = score.kappa_hat * root * sign[static_cast<std::size_t>(k)];
  if (score.kind == ScoreKind::kVmfLocationConcentration)
    for (int k = 0; k < d; ++k) out[static_cast<std::size_t>(k)] += score.kappa_hat * g * grid.pole()[static_cast<std::size_t>(k)];
  return out;
}

std::vector<std::vector<double>> score_values(const transport::EmpiricalTransport& t,
                                              const ScoreFunction& score) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(t.size()));
  for (int i = 0; i < t.size(); ++i)
    out[static_cast<std::size_t>(i)] = score_at(t.grid(), t.grid_index()[static_cast<std::size_t>(i)], score);
  return out;
}

std::vector<double> d_matrix(const ScoreFunction& score, const grids::StructuredGrid& grid) {
  const int k = score.d_J;
  std::vector<double> m(static_cast<std::size_t>(k) * k, 0.0);
  if (score.kind == ScoreKind::kUniform) {
    for (int i = 0; i < k; ++i) m[static_cast<std::size_t>(i) * k + i] = 1.0 / k;
    return m;
  }
  const int n = grid.size();
  std::vector<double> mean(static_cast<std::size_t>(k), 0.0);
  std::vector<std::vector<double>> vals(static_cast<std::size_t>(n));
  for (int pos = 0; pos < n; ++pos) {
    vals[static_cast<std::size_t>(pos)] = score_at(grid, pos, score);
    for (int a = 0; a < k; ++a) mean[static_cast<std::size_t>(a)] += vals[static_cast<std::size_t>(pos)][static_cast<std::size_t>(a)];
  }
  for (auto& x : mean) x /= n;
  for (int pos = 0; pos < n; ++pos)
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        m[static_cast<std::size_t>(a) * k + b] += (vals[static_cast<std::size_t>(pos)][static_cast<std::size_t>(a)] - mean[static_cast<std::size_t>(a)]) *
                                                  (vals[static_cast<std::size_t>(pos)][static_cast<std::size_t>(b)] - mean[static_cast<std::size_t>(b)]);
  for (auto& x : m) x /= n;
  return m;
}

namespace {

// Cyclic Jacobi eigendecomposition of a symmetric k x k matrix.
void jacobi_eigen(std::vector<double> a, int k, std::vector<double>& eigval,
                  std::vector<double>& eigvec) {
  eigvec.assign(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) eigvec[static_cast<std::size_t>(i) * k + i] = 1.0;
  auto at = [&](std::vector<double>& m, int r, int c) -> double& { return m[static_cast<std::size_t>(r) * k + c]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q) off += at(a, p, q) * at(a, p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < k; ++p) {
      for (int q = p + 1; q < k; ++q) {
        const double apq = at(a, p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = 0.5 * (at(a, q, q) - at(a, p, p)) / apq;
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int r = 0; r < k; ++r) {
          const double arp = at(a, r, p), arq = at(a, r, q);
          at(a, r, p) = c * arp - s * arq;
          at(a, r, q) = s * arp + c * arq;
        }
        for (int r = 0; r < k; ++r) {
          const double apr = at(a, p, r), aqr = at(a, q, r);
          at(a, p, r) = c * apr - s * aqr;
          at(a, q, r) = s * apr + c * aqr;
        }
        for (int r = 0; r < k; ++r) {
          const double vrp = at(eigvec, r, p), vrq = at(eigvec, r, q);
          at(eigvec, r, p) = c * vrp - s * vrq;
          at(eigvec, r, q) = s * vrp + c * vrq;
        }
      }
    }
  }
  eigval.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) eigval[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i) * k + i];
}

}  // namespace

std::pair<std::vector<double>, int> pseudo_inverse(const std::vector<double>& m, int k) {
  if (static_cast<int>(m.size()) != k * k) throw std::invalid_argument("pseudo_inverse: bad size");
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      if (std::abs(m[static_cast<std::size_t>(a) * k + b] - m[static_cast<std::size_t>(b) * k + a]) >
          1e-9 * (1.0 + std::abs(m[static_cast<std::size_t>(a) * k + b])))
        throw std::invalid_argument("pseudo_inverse: matrix not symmetric");
  std::vector<double> eigval, eigvec;
  jacobi_eigen(m, k, eigval, eigvec);
  double lmax = 0.0;
  for (double l : eigval) lmax = std::max(lmax, std::abs(l));
  const double cut = 1e-10 * lmax;
  int rank = 0;
  std::vector<double> inv(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) {
    const double l = eigval[static_cast<std::size_t>(i)];
    if (l <= cut) continue;
    ++rank;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        inv[static_cast<std::size_t>(a) * k + b] +=
            eigvec[static_cast<std::size_t>(a) * k + i] * eigvec[static_cast<std::size_t>(b) * k + i] / l;
  }
  return {std::move(inv), rank};
}

namespace {

std::vector<std::vector<double>> delta_components(const std::vector<std::vector<double>>& values,
                                                  const std::vector<int>& sizes, int d_J) {
  const int n = static_cast<int>(values.size());
  const int m = static_cast<int>(sizes.size());
  // Delta_i = n_i^{-1/2} sum_{group i} J  -  (n_i^{1/2}/n) sum_all J.
  std::vector<double> grand(static_cast<std::size_t>(d_J), 0.0);
  for (const auto& v : values)
    for (int a = 0; a < d_J; ++a) grand[static_cast<std::size_t>(a)] += v[static_cast<std::size_t>(a)];
  std::vector<std::vector<double>> delta(static_cast<std::size_t>(m),
                                         std::vector<double>(static_cast<std::size_t>(d_J), 0.0));
  int offset = 0;
  for (int i = 0; i < m; ++i) {
    const int ni = sizes[static_cast<std::size_t>(i)];
    auto& di = delta[static_cast<std::size_t>(i)];
    for (int l = offset; l < offset + ni; ++l)
      for (int a = 0; a < d_J; ++a) di[static_cast<std::size_t>(a)] += values[static_cast<std::size_t>(l)][static_cast<std::size_t>(a)];
    const double inv_sqrt_ni = 1.0 / std::sqrt(static_cast<double>(ni));
    const double shrink = std::sqrt(static_cast<double>(ni)) / n;
    for (int a = 0; a < d_J; ++a)
      di[static_cast<std::size_t>(a)] = di[static_cast<std::size_t>(a)] * inv_sqrt_ni - shrink * grand[static_cast<std::size_t>(a)];
    offset += ni;
  }
  return delta;
}

}  // namespace

double q_form(const std::vector<std::vector<double>>& values, const std::vector<int>& sizes,
              const std::vector<double>& dinv, int d_J) {
  int total = 0;
  for (int s : sizes) total += s;
  if (total != static_cast<int>(values.size()))
    throw std::invalid_argument("q_form: group sizes do not sum to n");
  const auto delta = delta_components(values, sizes, d_J);
  double q = 0.0;
  for (const auto& di : delta)
    for (int a = 0; a < d_J; ++a)
      for (int b = 0; b < d_J; ++b)
        q += di[static_cast<std::size_t>(a)] * dinv[static_cast<std::size_t>(a) * d_J + b] * di[static_cast<std::size_t>(b)];
  return q;
}

ManovaReport q_statistic_with_fit(const transport::EmpiricalTransport& t,
                                  const std::vector<int>& sizes, ScoreKind kind,
                                  double kappa_hat, double alpha) {
  const int n = t.size();
  const int m = static_cast<int>(sizes.size());
  int total = 0;
  for (int s : sizes) total += s;
  if (total != n) throw std::invalid_argument("q_statistic: group sizes do not sum to n");

  const ScoreFunction score = make_score(kind, t, kappa_hat);
  const auto values = score_values(t, score);
  const int dj = score.d_J;

  const auto delta = delta_components(values, sizes, dj);
  const auto dj_matrix = d_matrix(score, t.grid());
  const auto [dinv, rank] = pseudo_inverse(dj_matrix, dj);

  double q = 0.0;
  for (const auto& di : delta)
    for (int a = 0; a < dj; ++a)
      for (int b = 0; b < dj; ++b)
        q += di[static_cast<std::size_t>(a)] * dinv[static_cast<std::size_t>(a) * dj + b] * di[static_cast<std::size_t>(b)];

  ManovaReport rep;
  rep.method = "rank-score";
  rep.score = score_name(kind);
  rep.statistic = q;
  rep.d_star = rank;
  rep.df = (m - 1) * rank;
  rep.alpha = alpha;
  rep.kappa_hat = kappa_hat;
  rep.delta = delta;
  if (rep.df >= 1) {
    rep.p_value = special::chi2_sf(q, rep.df);
    rep.reject = q > special::chi2_quantile(1.0 - alpha, rep.df);
  } else {
    rep.p_value = 1.0;
    rep.reject = false;
  }
  return rep;
}

ManovaReport q_statistic(const PooledSample& pooled, ScoreKind kind, int n_R, int n_S,
                         int n_0, std::uint64_t seed, double alpha) {
  pooled.validate();
  const Sample y = pooled.pooled();
  const auto t = transport::fit(y, n_R, n_S, n_0, seed);
  const double kappa_hat = kind == ScoreKind::kUniform ? 0.0 : models::vmf_kappa_mle(y);
  return q_statistic_with_fit(t, pooled.sizes(), kind, kappa_hat, alpha);
}

ManovaReport pvmf_test(const PooledSample& pooled, double alpha) {
  pooled.validate();
  const int m = static_cast<int>(pooled.groups.size());
  const int d = pooled.dim();
  const int n = pooled.total();
  const UnitVector theta = models::frechet_mean(pooled.pooled());

  std::vector<std::vector<double>> xbar(static_cast<std::size_t>(m),
                                        std::vector<double>(static_cast<std::size_t>(d), 0.0));
  std::vector<double> e(static_cast<std::size_t>(m), 0.0), bconc(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) {
    const auto& g = pooled.groups[static_cast<std::size_t>(i)];
    double sum_proj = 0.0, sum_proj2 = 0.0;
    for (const auto& z : g) {
      for (int k = 0; k < d; ++k) xbar[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] += z[static_cast<std::size_t>(k)];
      const double p = dot(z.span(), theta.span());
      sum_proj += p;
      sum_proj2 += p * p;
    }
    const double ni = static_cast<double>(g.size());
    for (auto& x : xbar[static_cast<std::size_t>(i)]) x /= ni;
    e[static_cast<std::size_t>(i)] = sum_proj / ni;
    bconc[static_cast<std::size_t>(i)] = 1.0 - sum_proj2 / ni;
    if (bconc[static_cast<std::size_t>(i)] <= 1e-12)
      throw std::runtime_error("pvmf_test: degenerate group concentration");
  }

  // Tangent projections (I - theta theta^T) xbar_i.
  std::vector<std::vector<double>> proj(static_cast<std::size_t>(m),
                                        std::vector<double>(static_cast<std::size_t>(d), 0.0));
  for (int i = 0; i < m; ++i) {
    const double a = dot(xbar[static_cast<std::size_t>(i)], theta.span());
    for (int k = 0; k < d; ++k)
      proj[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = xbar[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] - a * theta[static_cast<std::size_t>(k)];
  }

  double h = 0.0;
  std::vector<double> dconc(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) {
    const double ni = static_cast<double>(pooled.groups[static_cast<std::size_t>(i)].size());
    dconc[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)] / bconc[static_cast<std::size_t>(i)];
    h += (ni / n) * dconc[static_cast<std::size_t>(i)] * dconc[static_cast<std::size_t>(i)] * bconc[static_cast<std::size_t>(i)];
  }
  if (std::abs(h) <= 1e-14) throw std::runtime_error("pvmf_test: degenerate pooled concentration");

  double first = 0.0, second = 0.0;
  for (int i = 0; i < m; ++i) {
    const double ni = static_cast<double>(pooled.groups[static_cast<std::size_t>(i)].size());
    // n_i D_i / E_i = n_i / B_i, written that way so E_i ~ 0 is harmless.
    first += ni / bconc[static_cast<std::size_t>(i)] *
             dot(xbar[static_cast<std::size_t>(i)], proj[static_cast<std::size_t>(i)]);
    for (int j = 0; j < m; ++j) {
      const double nj = static_cast<double>(pooled.groups[static_cast<std::size_t>(j)].size());
      second += ni * nj / n * dconc[static_cast<std::size_t>(i)] * dconc[static_cast<std::size_t>(j)] / h *
                dot(xbar[static_cast<std::size_t>(i)], proj[static_cast<std::size_t>(j)]);
    }
  }

  ManovaReport rep;
  rep.method = "pvmf";
  rep.score = "pvmf";
  rep.statistic = (d - 1.0) * (first - second);
  rep.d_star = d - 1;
  rep.df = (m - 1) * (d - 1);
  rep.alpha = alpha;
  rep.p_value = special::chi2_sf(rep.statistic, rep.df);
  rep.reject = rep.statistic > special::chi2_quantile(1.0 - alpha, rep.df);
  return rep;
}

double chi2_sf(double x, int df) { return special::chi2_sf(x, df); }
double chi2_quantile(double p, int df) { return special::chi2_quantile(p, df); }

}  // namespace sphot::manova
