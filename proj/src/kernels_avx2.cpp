#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "sphot/kernels.hpp"

namespace sphot::kernels {

namespace {

// Horizontal (value, index) reduction honoring the first-index tie rule.
// Each lane holds the first occurrence of its own sub-stream minimum, so the
// global first occurrence is always among the four candidates.
MinLoc reduce_minloc(__m256d vbest, __m256i vidx) {
  alignas(32) double bv[4];
  alignas(32) std::int64_t bi[4];
  _mm256_store_pd(bv, vbest);
  _mm256_store_si256(reinterpret_cast<__m256i*>(bi), vidx);
  double best = std::numeric_limits<double>::infinity();
  std::ptrdiff_t best_j = -1;
  for (int l = 0; l < 4; ++l) {
    if (bi[l] < 0) continue;
    if (bv[l] < best || (bv[l] == best && bi[l] < best_j)) {
      best = bv[l];
      best_j = static_cast<std::ptrdiff_t>(bi[l]);
    }
  }
  return {best, best_j};
}

MinLoc relax_scan_avx2(double* dist, std::int64_t* pred, const double* cost,
                       const double* v, const std::uint64_t* done, double base,
                       std::int64_t tag, std::size_t n) {
  const __m256d vbase = _mm256_set1_pd(base);
  const __m256d vinf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  const __m256i vtag = _mm256_set1_epi64x(tag);
  const __m256i vzero = _mm256_setzero_si256();
  __m256d vbest = vinf;
  __m256i vbestidx = _mm256_set1_epi64x(-1);
  __m256i lane_idx = _mm256_set_epi64x(3, 2, 1, 0);
  const __m256i step = _mm256_set1_epi64x(4);

  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t j = 0; j < n4; j += 4) {
    const __m256i md = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(done + j));
    const __m256d open = _mm256_castsi256_pd(_mm256_cmpeq_epi64(md, vzero));
    const __m256d c4 = _mm256_loadu_pd(cost + j);
    const __m256d v4 = _mm256_loadu_pd(v + j);
    __m256d d4 = _mm256_loadu_pd(dist + j);
    const __m256d t = _mm256_add_pd(vbase, _mm256_sub_pd(c4, v4));
    const __m256d improve = _mm256_and_pd(_mm256_cmp_pd(t, d4, _CMP_LT_OQ), open);
    d4 = _mm256_blendv_pd(d4, t, improve);
    _mm256_storeu_pd(dist + j, d4);
    __m256i p4 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(pred + j));
    p4 = _mm256_blendv_epi8(p4, vtag, _mm256_castpd_si256(improve));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(pred + j), p4);

    const __m256d cand = _mm256_blendv_pd(vinf, d4, open);
    const __m256d less = _mm256_cmp_pd(cand, vbest, _CMP_LT_OQ);
    vbest = _mm256_blendv_pd(vbest, cand, less);
    vbestidx = _mm256_blendv_epi8(vbestidx, lane_idx, _mm256_castpd_si256(less));
    lane_idx = _mm256_add_epi64(lane_idx, step);
  }

  MinLoc m = reduce_minloc(vbest, vbestidx);
  for (std::size_t j = n4; j < n; ++j) {
    if (done[j]) continue;
    const double t = base + (cost[j] - v[j]);
    if (t < dist[j]) {
      dist[j] = t;
      pred[j] = tag;
    }
    if (dist[j] < m.value) {
      m.value = dist[j];
      m.index = static_cast<std::ptrdiff_t>(j);
    }
  }
  return m;
}

void colmin_update_avx2(double* colmin, std::int64_t* colarg, const double* row,
                        std::int64_t i, std::size_t n) {
  const __m256i vi = _mm256_set1_epi64x(i);
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t j = 0; j < n4; j += 4) {
    const __m256d r4 = _mm256_loadu_pd(row + j);
    __m256d m4 = _mm256_loadu_pd(colmin + j);
    const __m256d less = _mm256_cmp_pd(r4, m4, _CMP_LT_OQ);
    m4 = _mm256_blendv_pd(m4, r4, less);
    _mm256_storeu_pd(colmin + j, m4);
    __m256i a4 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(colarg + j));
    a4 = _mm256_blendv_epi8(a4, vi, _mm256_castpd_si256(less));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(colarg + j), a4);
  }
  for (std::size_t j = n4; j < n; ++j) {
    if (row[j] < colmin[j]) {
      colmin[j] = row[j];
      colarg[j] = i;
    }
  }
}

void cost_row_avx2(double* out, const double* z, const double* soa, std::size_t dim,
                   std::size_t n) {
  const __m256d lo = _mm256_set1_pd(-1.0);
  const __m256d hi = _mm256_set1_pd(1.0);
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t j = 0; j < n4; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k)
      acc = _mm256_fmadd_pd(_mm256_set1_pd(z[k]), _mm256_loadu_pd(soa + k * n + j), acc);
    acc = _mm256_min_pd(_mm256_max_pd(acc, lo), hi);
    _mm256_storeu_pd(out + j, acc);
  }
  for (std::size_t j = n4; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) acc = std::fma(z[k], soa[k * n + j], acc);
    out[j] = std::clamp(acc, -1.0, 1.0);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double a = std::acos(out[j]);
    out[j] = 0.5 * a * a;
  }
}

}  // namespace

bool avx2_available() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const Ops& avx2_ops() {
  static const Ops ops{relax_scan_avx2, colmin_update_avx2, cost_row_avx2, "avx2"};
  return ops;
}

}  // namespace sphot::kernels

#endif  // x86_64
