#include "sphot/grids.hpp"

#include <cmath>
#include <stdexcept>

#include "sphot/rng.hpp"

namespace sphot::grids {

PlainGrid plain_grid(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 2) throw std::invalid_argument("plain_grid: need n >= 1 and d >= 2");
  PlainGrid grid;
  grid.seed = seed;
  grid.points.reserve(static_cast<std::size_t>(n));
  if (d == 3) {
    // Spherical Fibonacci lattice: symmetric z-ladder plus golden-angle turns.
    const double golden_angle = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden_angle * i;
      grid.points.push_back(UnitVector({r * std::cos(phi), r * std::sin(phi), z}));
    }
  } else {
    Rng rng(derive_seed(seed, "plain-grid"));
    grid.points = models::sample_uniform(n, d, rng);
  }
  return grid;
}

std::vector<std::vector<double>> equator_grid(int n_S, int d) {
  if (n_S < 1 || d < 2) throw std::invalid_argument("equator_grid: bad arguments");
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(n_S));
  if (d == 2) {
    if (n_S > 2) throw std::invalid_argument("equator_grid: S^0 supports n_S <= 2");
    out.push_back({1.0});
    if (n_S == 2) out.push_back({-1.0});
  } else if (d == 3) {
    for (int j = 0; j < n_S; ++j) {
      const double a = 2.0 * M_PI * j / n_S;
      out.push_back({std::cos(a), std::sin(a)});
    }
  } else {
    const auto pts = plain_grid(n_S, d - 1, /*seed=*/0x5eed5eedULL).points;
    for (const auto& p : pts) out.push_back(p.coords());
  }
  return out;
}

StructuredGrid::StructuredGrid(UnitVector pole, int n_R, int n_S, int n_0)
    : pole_(std::move(pole)), basis_(pole_), n_R_(n_R), n_S_(n_S), n_0_(n_0) {
  if (n_R_ < 1 || n_S_ < 1 || n_0_ < 0 || n_0_ >= std::min(n_R_, n_S_))
    throw std::invalid_argument("StructuredGrid: need 0 <= n_0 < min(n_R, n_S)");
  const int d = pole_.dim();
  equator_ = equator_grid(n_S_, d);
  latitudes_.reserve(static_cast<std::size_t>(n_R_));
  for (int i = 1; i <= n_R_; ++i)
    latitudes_.push_back(models::q_star(1.0 - static_cast<double>(i) / (n_R_ + 1), d));
  points_.reserve(static_cast<std::size_t>(size()));
  for (int k = 0; k < n_0_; ++k) points_.push_back(pole_);
  for (int i = 0; i < n_R_; ++i) {
    const double u = latitudes_[static_cast<std::size_t>(i)];
    const double r = std::sqrt(std::max(0.0, 1.0 - u * u));
    for (int j = 0; j < n_S_; ++j) {
      auto tan_part = basis_.apply(equator_[static_cast<std::size_t>(j)]);
      std::vector<double> p(static_cast<std::size_t>(d));
      for (int k = 0; k < d; ++k)
        p[static_cast<std::size_t>(k)] = u * pole_[static_cast<std::size_t>(k)] + r * tan_part[static_cast<std::size_t>(k)];
      points_.emplace_back(std::move(p));
    }
  }
}

std::vector<double> StructuredGrid::sign_of(int pos) const {
  if (pos < n_0_) return std::vector<double>(static_cast<std::size_t>(dim()), 0.0);
  return basis_.apply(equator_[static_cast<std::size_t>(meridian_of(pos))]);
}

GridShape auto_shape(int n, int d) {
  if (n < 1) throw std::invalid_argument("auto_shape: n must be >= 1");
  auto try_shape = [n](int n_S) -> GridShape {
    if (n_S < 1 || n_S > n) return {};
    const int n_R = n / n_S;
    const int n_0 = n - n_R * n_S;
    if (n_R >= 1 && n_0 < std::min(n_R, n_S)) return {n_R, n_S, n_0};
    return {};
  };
  if (d == 2) {
    const GridShape s = try_shape(std::min(2, n));
    if (s.n_S == 0) throw std::invalid_argument("auto_shape: no valid d=2 factorization");
    return s;
  }
  const int base = static_cast<int>(std::llround(std::sqrt(static_cast<double>(n))));
  for (int delta = 0; delta <= n; ++delta) {
    for (const int s : {base + delta, base - delta}) {
      const GridShape shape = try_shape(s);
      if (shape.n_S != 0) return shape;
      if (delta == 0) break;
    }
  }
  throw std::invalid_argument("auto_shape: no valid factorization");
}

}  // namespace sphot::grids
