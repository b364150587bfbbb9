#include "sphot/transport.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sphot/kernels.hpp"

namespace sphot::transport {

assignment::CostMatrix cost_matrix(const Sample& sample, const std::vector<UnitVector>& grid) {
  const std::size_t n = sample.size();
  if (n == 0 || grid.size() != n)
    throw std::invalid_argument("cost_matrix: sample and grid sizes must match");
  const int d = sample.front().dim();
  // Structure-of-arrays copy of the grid so cost rows stream contiguously.
  std::vector<double> soa(static_cast<std::size_t>(d) * n);
  for (std::size_t j = 0; j < n; ++j) {
    if (grid[j].dim() != d) throw std::invalid_argument("cost_matrix: dimension mismatch");
    for (int k = 0; k < d; ++k) soa[static_cast<std::size_t>(k) * n + j] = grid[j][static_cast<std::size_t>(k)];
  }
  const auto& ops = kernels::active_ops();
  std::vector<double> entries(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (sample[i].dim() != d) throw std::invalid_argument("cost_matrix: dimension mismatch");
    ops.cost_row(entries.data() + i * n, sample[i].coords().data(), soa.data(),
                 static_cast<std::size_t>(d), n);
  }
  return assignment::CostMatrix(n, std::move(entries));
}

PlainFit fit_plain(const Sample& sample, const grids::PlainGrid& grid) {
  const auto solved = assignment::solve(cost_matrix(sample, grid.points));
  return {solved.perm, solved.total_cost};
}

UnitVector estimate_pole(const Sample& sample, std::uint64_t grid_seed) {
  if (sample.empty()) throw std::invalid_argument("estimate_pole: empty sample");
  const int d = sample.front().dim();
  const UnitVector center = models::frechet_mean(sample);
  const auto grid = grids::plain_grid(static_cast<int>(sample.size()), d, grid_seed);
  const PlainFit f = fit_plain(sample, grid);
  std::size_t closest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double dist = geodesic_distance(sample[i], center);
    if (dist < best) {
      best = dist;
      closest = i;
    }
  }
  return grid.points[static_cast<std::size_t>(f.grid_index[closest])];
}

EmpiricalTransport::EmpiricalTransport(Sample sample, grids::StructuredGrid grid,
                                       std::vector<int> grid_index, double total_cost)
    : sample_(std::move(sample)),
      grid_(std::move(grid)),
      grid_index_(std::move(grid_index)),
      total_cost_(total_cost) {
  const int n = size();
  if (grid_.size() != n || static_cast<int>(grid_index_.size()) != n)
    throw std::invalid_argument("EmpiricalTransport: size mismatch");
  ranks_.resize(static_cast<std::size_t>(n));
  signs_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int pos = grid_index_[static_cast<std::size_t>(i)];
    ranks_[static_cast<std::size_t>(i)] = grid_.rank_of(pos);
    signs_[static_cast<std::size_t>(i)] = grid_.sign_of(pos);
  }
}

EmpiricalTransport fit(const Sample& sample, int n_R, int n_S, int n_0, std::uint64_t seed) {
  const int n = static_cast<int>(sample.size());
  if (n != n_R * n_S + n_0)
    throw std::invalid_argument("fit: sample size does not match the factorization");
  return fit_with_pole(sample, estimate_pole(sample, seed), n_R, n_S, n_0);
}

EmpiricalTransport fit_with_pole(const Sample& sample, UnitVector pole, int n_R, int n_S,
                                 int n_0) {
  const int n = static_cast<int>(sample.size());
  if (n != n_R * n_S + n_0)
    throw std::invalid_argument("fit: sample size does not match the factorization");
  grids::StructuredGrid grid(std::move(pole), n_R, n_S, n_0);
  const auto solved = assignment::solve(cost_matrix(sample, grid.points()));
  return EmpiricalTransport(sample, std::move(grid), solved.perm, solved.total_cost);
}

Sample contour(const EmpiricalTransport& t, int j) {
  if (j < 1 || j > t.grid().n_R()) throw std::invalid_argument("contour: rank out of range");
  Sample out;
  for (int i = 0; i < t.size(); ++i)
    if (t.ranks()[static_cast<std::size_t>(i)] == j) out.push_back(t.sample()[static_cast<std::size_t>(i)]);
  return out;
}

Sample region(const EmpiricalTransport& t, int j) {
  if (j < 1 || j > t.grid().n_R()) throw std::invalid_argument("region: rank out of range");
  Sample out;
  for (int i = 0; i < t.size(); ++i)
    if (t.ranks()[static_cast<std::size_t>(i)] <= j) out.push_back(t.sample()[static_cast<std::size_t>(i)]);
  return out;
}

Sample meridian(const EmpiricalTransport& t, int j_s) {
  if (j_s < 0 || j_s >= t.grid().n_S()) throw std::invalid_argument("meridian: index out of range");
  Sample out;
  for (int i = 0; i < t.size(); ++i) {
    const int pos = t.grid_index()[static_cast<std::size_t>(i)];
    if (t.grid().rank_of(pos) >= 1 && t.grid().meridian_of(pos) == j_s)
      out.push_back(t.sample()[static_cast<std::size_t>(i)]);
  }
  return out;
}

UnitVector transport_median(const EmpiricalTransport& t) {
  const int n = t.size();
  int best_i = 0;
  double best_score = -1.0;
  for (int i = 0; i < n; ++i) {
    // Sample points whose images lie in the hemisphere around F(z_i), and
    // among those, the fraction geodesically within pi/2 of z_i.
    int in_hemisphere = 0, concordant = 0;
    for (int k = 0; k < n; ++k) {
      if (dot(t.image(k).span(), t.image(i).span()) < 0.0) continue;
      ++in_hemisphere;
      if (dot(t.sample()[static_cast<std::size_t>(k)].span(), t.sample()[static_cast<std::size_t>(i)].span()) >= 0.0) ++concordant;
    }
    const double score = in_hemisphere > 0 ? static_cast<double>(concordant) / in_hemisphere : 0.0;
    if (score > best_score) {
      best_score = score;
      best_i = i;
    }
  }
  return t.sample()[static_cast<std::size_t>(best_i)];
}

}  // namespace sphot::transport
