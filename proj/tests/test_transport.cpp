#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sphot/assignment.hpp"
#include "sphot/transport.hpp"

using namespace sphot;

namespace {

const UnitVector kE3({0.0, 0.0, 1.0});

Sample vmf_sample(int n, double kappa, std::uint64_t seed, const UnitVector& theta = kE3) {
  Rng rng(seed);
  return models::sample_vmf(n, {theta, kappa}, rng);
}

}  // namespace

TEST_CASE("plain fit") {
  SUBCASE("self-coupling is free") {
    const auto grid = grids::plain_grid(24, 3, 0);
    Sample sample = grid.points;
    std::reverse(sample.begin(), sample.end());
    const auto f = transport::fit_plain(sample, grid);
    CHECK(f.total_cost == doctest::Approx(0.0).epsilon(1e-12));
    for (std::size_t i = 0; i < sample.size(); ++i)
      CHECK(sample[i].coords() == grid.points[static_cast<std::size_t>(f.grid_index[i])].coords());
  }
  SUBCASE("matches the exhaustive oracle at n = 6") {
    Rng rng(44);
    const Sample sample = models::sample_uniform(6, 3, rng);
    const auto grid = grids::plain_grid(6, 3, 0);
    const auto f = transport::fit_plain(sample, grid);
    const auto exact = assignment::brute_force(transport::cost_matrix(sample, grid.points));
    CHECK(f.total_cost == doctest::Approx(exact.total_cost).epsilon(1e-12));
  }
  SUBCASE("rotating sample and grid together keeps the cost") {
    Rng rng(45);
    const Sample sample = models::sample_uniform(40, 3, rng);
    const auto grid = grids::plain_grid(40, 3, 0);
    const auto rot = rotation_z(1.9);
    Sample rs;
    std::vector<UnitVector> rg;
    for (const auto& z : sample) rs.push_back(rotate(rot, z));
    for (const auto& g : grid.points) rg.push_back(rotate(rot, g));
    const auto base = transport::fit_plain(sample, grid);
    const auto moved = assignment::solve(transport::cost_matrix(rs, rg));
    CHECK(std::abs(base.total_cost - moved.total_cost) <= 1e-9);
  }
  CHECK_THROWS(transport::fit_plain(vmf_sample(5, 1.0, 1), grids::plain_grid(6, 3, 0)));
}

TEST_CASE("pole estimation") {
  SUBCASE("grid coupled with itself returns a sample point") {
    const auto grid = grids::plain_grid(30, 3, 0);
    const auto pole = transport::estimate_pole(grid.points, 0);
    // Zero-cost coupling: the pole is the image of the sample point closest
    // to the Fréchet mean, which is that sample point itself.
    const auto center = models::frechet_mean(grid.points);
    double best = 1e9;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
      const double d = geodesic_distance(grid.points[i], center);
      if (d < best) {
        best = d;
        arg = i;
      }
    }
    CHECK(geodesic_distance(pole, grid.points[arg]) <= 1e-12);
  }
  SUBCASE("concentrated sample lands near the oracle image") {
    const auto sample = vmf_sample(900, 10.0, 46);
    const auto pole = transport::estimate_pole(sample, 0);
    // Population image of the Fréchet mean under the closed-form transport.
    const auto cdf = models::LatitudeCdf::vmf(10.0, 3);
    const auto oracle = models::rotsym_transport(models::frechet_mean(sample), kE3, cdf);
    CHECK(geodesic_distance(pole, oracle) < 0.3);
  }
  SUBCASE("uniform sample still yields a unit pole") {
    Rng rng(47);
    const auto sample = models::sample_uniform(64, 3, rng);
    const auto pole = transport::estimate_pole(sample, 3);
    CHECK(std::abs(norm(pole.span()) - 1.0) <= 1e-10);
  }
}

TEST_CASE("structured fit bookkeeping") {
  SUBCASE("rank multiset for n = 5") {
    const auto sample = vmf_sample(5, 2.0, 48);
    const auto t = transport::fit(sample, 2, 2, 1, 0);
    std::vector<int> ranks = t.ranks();
    std::sort(ranks.begin(), ranks.end());
    CHECK(ranks == std::vector<int>{0, 1, 1, 2, 2});
  }
  SUBCASE("bijective images and exact rank counts") {
    for (const int d : {2, 3, 5}) {
      Rng rng(49 + static_cast<std::uint64_t>(d));
      const int n_R = 4, n_S = d == 2 ? 2 : 5, n_0 = 1;
      const int n = n_R * n_S + n_0;
      const auto sample = models::sample_uniform(n, d, rng);
      const auto t = transport::fit(sample, n_R, n_S, n_0, 7);
      std::vector<int> used(static_cast<std::size_t>(n), 0);
      std::map<int, int> rank_counts;
      for (int i = 0; i < n; ++i) {
        used[static_cast<std::size_t>(t.grid_index()[static_cast<std::size_t>(i)])]++;
        rank_counts[t.ranks()[static_cast<std::size_t>(i)]]++;
      }
      for (int u : used) CHECK(u == 1);
      CHECK(rank_counts[0] == n_0);
      for (int j = 1; j <= n_R; ++j) CHECK(rank_counts[j] == n_S);
      // rank consistency through F_*
      for (int i = 0; i < n; ++i) {
        const int r = t.ranks()[static_cast<std::size_t>(i)];
        if (r == 0) continue;
        const double u = dot(t.image(i).span(), t.pole().span());
        CHECK(1.0 - models::f_star(u, d) ==
              doctest::Approx(static_cast<double>(r) / (n_R + 1)).epsilon(1e-9));
      }
      // sign consistency: orthogonal to the pole, zero iff rank zero
      for (int i = 0; i < n; ++i) {
        const auto& s = t.signs()[static_cast<std::size_t>(i)];
        const double ortho = dot(s, t.pole().span());
        if (t.ranks()[static_cast<std::size_t>(i)] == 0)
          CHECK(norm(s) == 0.0);
        else
          CHECK(std::abs(ortho) <= 1e-9);
      }
    }
  }
  SUBCASE("rotation leaves the rank multiset unchanged") {
    const auto sample = vmf_sample(36, 3.0, 50);
    const auto t1 = transport::fit(sample, 6, 6, 0, 1);
    const auto rot = rotation_z(2.7);
    Sample rotated;
    for (const auto& z : sample) rotated.push_back(rotate(rot, z));
    const auto t2 = transport::fit(rotated, 6, 6, 0, 1);
    auto r1 = t1.ranks(), r2 = t2.ranks();
    std::sort(r1.begin(), r1.end());
    std::sort(r2.begin(), r2.end());
    CHECK(r1 == r2);
  }
  CHECK_THROWS(transport::fit(vmf_sample(7, 1.0, 51), 2, 2, 1, 0));  // 7 != 5
}

TEST_CASE("known-pole fit couples a structured grid to itself") {
  const UnitVector pole({0.36, 0.48, 0.8});
  const grids::StructuredGrid grid(pole, 4, 5, 2);
  Sample sample = grid.points();
  std::reverse(sample.begin(), sample.end());
  const auto t = transport::fit_with_pole(sample, pole, 4, 5, 2);
  CHECK(t.total_cost() == doctest::Approx(0.0).epsilon(1e-12));
  // The rebuilt grid is bit-identical, so matched coordinates agree exactly.
  for (int i = 0; i < t.size(); ++i)
    CHECK(t.image(i).coords() == sample[static_cast<std::size_t>(i)].coords());
}

TEST_CASE("contours, regions, meridians") {
  const auto sample = vmf_sample(5 * 6 + 2, 4.0, 52);
  const auto t = transport::fit(sample, 5, 6, 2, 0);

  CHECK(transport::contour(t, 1).size() == 6);
  CHECK(transport::region(t, 1).size() == 2 + 6);
  CHECK(transport::region(t, 3).size() == 2 + 3 * 6);
  CHECK_THROWS(transport::contour(t, 0));
  CHECK_THROWS(transport::contour(t, 6));

  SUBCASE("contours partition the sample") {
    std::size_t total = 0;
    for (int j = 1; j <= 5; ++j) total += transport::contour(t, j).size();
    CHECK(total + 2 == sample.size());  // plus the n_0 rank-zero points
  }
  SUBCASE("meridians partition the non-pole sample with full rank ladders") {
    std::size_t total = 0;
    for (int js = 0; js < 6; ++js) {
      CHECK(transport::meridian(t, js).size() == 5);
      total += transport::meridian(t, js).size();
      // ranks within one meridian are exactly 1..n_R
      std::vector<int> ranks;
      for (int i = 0; i < t.size(); ++i) {
        const int pos = t.grid_index()[static_cast<std::size_t>(i)];
        if (t.grid().rank_of(pos) >= 1 && t.grid().meridian_of(pos) == js)
          ranks.push_back(t.ranks()[static_cast<std::size_t>(i)]);
      }
      std::sort(ranks.begin(), ranks.end());
      CHECK(ranks == std::vector<int>{1, 2, 3, 4, 5});
    }
    CHECK(total == 30);
    CHECK_THROWS(transport::meridian(t, 6));
  }
}

TEST_CASE("cyclical monotonicity of the fitted coupling") {
  const auto sample = vmf_sample(60, 2.0, 53);
  const auto t = transport::fit(sample, 10, 6, 0, 0);
  Rng rng(54);
  for (int rep = 0; rep < 1000; ++rep) {
    const int i = static_cast<int>(rng.uniform_below(60));
    const int k = static_cast<int>(rng.uniform_below(60));
    const double direct = transport_cost(sample[static_cast<std::size_t>(i)], t.image(i)) +
                          transport_cost(sample[static_cast<std::size_t>(k)], t.image(k));
    const double swapped = transport_cost(sample[static_cast<std::size_t>(i)], t.image(k)) +
                           transport_cost(sample[static_cast<std::size_t>(k)], t.image(i));
    CHECK(direct <= swapped + 1e-9);
  }
}

TEST_CASE("transport median") {
  SUBCASE("tight cluster agrees with the Fréchet mean") {
    const auto sample = vmf_sample(11 * 10, 100.0, 55);
    const auto t = transport::fit(sample, 11, 10, 0, 0);
    const auto med = transport::transport_median(t);
    CHECK(geodesic_distance(med, models::frechet_mean(sample)) < 0.2);
  }
  SUBCASE("deterministic and unit on uniform data") {
    Rng rng(56);
    const auto sample = models::sample_uniform(36, 3, rng);
    const auto t = transport::fit(sample, 6, 6, 0, 0);
    const auto m1 = transport::transport_median(t);
    const auto m2 = transport::transport_median(t);
    CHECK(std::abs(norm(m1.span()) - 1.0) <= 1e-10);
    CHECK(geodesic_distance(m1, m2) == 0.0);
  }
}

TEST_CASE("glivenko-cantelli trend at desk scale") {
  // Median over a few seeds of the max deviation from the closed-form
  // transport shrinks with n (the full 20-seed version runs in acceptance).
  const auto cdf = models::LatitudeCdf::vmf(10.0, 3);
  auto max_err = [&](int n, grids::GridShape shape, std::uint64_t seed) {
    const auto sample = vmf_sample(n, 10.0, seed);
    const auto t = transport::fit(sample, shape.n_R, shape.n_S, shape.n_0, seed);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto oracle = models::rotsym_transport(sample[static_cast<std::size_t>(i)], kE3, cdf);
      double sq = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double diff = t.image(i)[static_cast<std::size_t>(k)] - oracle[static_cast<std::size_t>(k)];
        sq += diff * diff;
      }
      worst = std::max(worst, std::sqrt(sq));
    }
    return worst;
  };
  std::vector<double> small, large;
  for (std::uint64_t s = 0; s < 5; ++s) {
    small.push_back(max_err(100, {10, 10, 0}, 60 + s));
    large.push_back(max_err(400, {20, 20, 0}, 80 + s));
  }
  std::sort(small.begin(), small.end());
  std::sort(large.begin(), large.end());
  CHECK(large[2] < small[2]);
}
