#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "sphot/kernels.hpp"
#include "sphot/rng.hpp"

using namespace sphot;

namespace {

struct ScanState {
  std::vector<double> dist;
  std::vector<std::int64_t> pred;
  std::vector<double> cost;
  std::vector<double> v;
  std::vector<std::uint64_t> done;
};

ScanState random_state(std::size_t n, Rng& rng, double done_fraction) {
  ScanState s;
  s.dist.resize(n);
  s.pred.resize(n);
  s.cost.resize(n);
  s.v.resize(n);
  s.done.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    s.dist[j] = rng.uniform01() < 0.2 ? std::numeric_limits<double>::infinity()
                                      : 5.0 * rng.uniform01();
    s.pred[j] = static_cast<std::int64_t>(rng.uniform_below(100));
    // Duplicated values on purpose, to exercise the first-index tie rule.
    s.cost[j] = std::floor(rng.uniform01() * 8.0) / 4.0;
    s.v[j] = std::floor(rng.uniform01() * 8.0) / 8.0;
    s.done[j] = rng.uniform01() < done_fraction ? ~std::uint64_t{0} : 0;
  }
  return s;
}

}  // namespace

TEST_CASE("scalar relax scan semantics") {
  const auto& ops = kernels::scalar_ops();
  std::vector<double> dist = {2.0, 0.5, 3.0, 0.5};
  std::vector<std::int64_t> pred = {9, 9, 9, 9};
  const std::vector<double> cost = {1.0, 4.0, 1.0, 4.0};
  const std::vector<double> v = {0.0, 0.0, 0.0, 0.0};
  const std::vector<std::uint64_t> done = {0, 0, ~std::uint64_t{0}, 0};
  const auto m = ops.relax_scan(dist.data(), pred.data(), cost.data(), v.data(), done.data(),
                                0.0, 7, dist.size());
  CHECK(dist[0] == 1.0);   // improved
  CHECK(pred[0] == 7);
  CHECK(dist[1] == 0.5);   // not improved
  CHECK(pred[1] == 9);
  CHECK(dist[2] == 3.0);   // done: untouched
  CHECK(pred[2] == 9);
  CHECK(m.value == 0.5);
  CHECK(m.index == 1);     // first index among the tied minima
}

#if defined(__x86_64__) || defined(_M_X64)

TEST_CASE("avx2 kernels match scalar bit for bit") {
  if (!kernels::avx2_available()) return;
  const auto& scalar = kernels::scalar_ops();
  const auto& avx2 = kernels::avx2_ops();
  Rng rng(2024);

  SUBCASE("relax scan") {
    for (const std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 13u, 16u, 33u, 100u, 257u}) {
      for (int rep = 0; rep < 30; ++rep) {
        auto a = random_state(n, rng, rep % 3 == 0 ? 0.5 : 0.1);
        auto b = a;
        const double base = rng.uniform01();
        const auto ma = scalar.relax_scan(a.dist.data(), a.pred.data(), a.cost.data(),
                                          a.v.data(), a.done.data(), base, 55, n);
        const auto mb = avx2.relax_scan(b.dist.data(), b.pred.data(), b.cost.data(),
                                        b.v.data(), b.done.data(), base, 55, n);
        CHECK(std::memcmp(a.dist.data(), b.dist.data(), n * sizeof(double)) == 0);
        CHECK(std::memcmp(a.pred.data(), b.pred.data(), n * sizeof(std::int64_t)) == 0);
        CHECK(ma.index == mb.index);
        CHECK((std::isinf(ma.value) ? std::isinf(mb.value) : ma.value == mb.value));
      }
    }
  }

  SUBCASE("relax scan with everything masked") {
    auto a = random_state(12, rng, 1.1);
    auto b = a;
    const auto ma = scalar.relax_scan(a.dist.data(), a.pred.data(), a.cost.data(), a.v.data(),
                                      a.done.data(), 0.25, 1, 12);
    const auto mb = avx2.relax_scan(b.dist.data(), b.pred.data(), b.cost.data(), b.v.data(),
                                    b.done.data(), 0.25, 1, 12);
    CHECK(ma.index == -1);
    CHECK(mb.index == -1);
  }

  SUBCASE("column minimum update") {
    for (const std::size_t n : {1u, 3u, 4u, 9u, 64u, 130u}) {
      std::vector<double> colmin_a(n), row(n);
      std::vector<std::int64_t> colarg_a(n, -1);
      for (std::size_t j = 0; j < n; ++j) {
        colmin_a[j] = std::floor(rng.uniform01() * 4.0);
        row[j] = std::floor(rng.uniform01() * 4.0);
      }
      auto colmin_b = colmin_a;
      auto colarg_b = colarg_a;
      scalar.colmin_update(colmin_a.data(), colarg_a.data(), row.data(), 3, n);
      avx2.colmin_update(colmin_b.data(), colarg_b.data(), row.data(), 3, n);
      CHECK(std::memcmp(colmin_a.data(), colmin_b.data(), n * sizeof(double)) == 0);
      CHECK(std::memcmp(colarg_a.data(), colarg_b.data(), n * sizeof(std::int64_t)) == 0);
    }
  }

  SUBCASE("cost row") {
    for (const int d : {2, 3, 5}) {
      for (const std::size_t n : {1u, 4u, 5u, 31u, 64u}) {
        std::vector<double> soa(static_cast<std::size_t>(d) * n), z(static_cast<std::size_t>(d));
        for (auto& x : soa) x = 2.0 * rng.uniform01() - 1.0;
        for (auto& x : z) x = 2.0 * rng.uniform01() - 1.0;
        std::vector<double> out_a(n), out_b(n);
        scalar.cost_row(out_a.data(), z.data(), soa.data(), static_cast<std::size_t>(d), n);
        avx2.cost_row(out_b.data(), z.data(), soa.data(), static_cast<std::size_t>(d), n);
        CHECK(std::memcmp(out_a.data(), out_b.data(), n * sizeof(double)) == 0);
      }
    }
  }
}

#endif  // x86_64

TEST_CASE("active ops selection") {
  const auto& ops = kernels::active_ops();
  CHECK(ops.relax_scan != nullptr);
  CHECK(ops.colmin_update != nullptr);
  CHECK(ops.cost_row != nullptr);
}
