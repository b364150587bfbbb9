#include "sphot/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string_view>

namespace sphot::kernels {

namespace {

MinLoc relax_scan_scalar(double* dist, std::int64_t* pred, const double* cost,
                         const double* v, const std::uint64_t* done, double base,
                         std::int64_t tag, std::size_t n) {
  double best = std::numeric_limits<double>::infinity();
  std::ptrdiff_t best_j = -1;
  for (std::size_t j = 0; j < n; ++j) {
    if (done[j]) continue;
    const double t = base + (cost[j] - v[j]);
    if (t < dist[j]) {
      dist[j] = t;
      pred[j] = tag;
    }
    if (dist[j] < best) {
      best = dist[j];
      best_j = static_cast<std::ptrdiff_t>(j);
    }
  }
  return {best, best_j};
}

void colmin_update_scalar(double* colmin, std::int64_t* colarg, const double* row,
                          std::int64_t i, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    if (row[j] < colmin[j]) {
      colmin[j] = row[j];
      colarg[j] = i;
    }
  }
}

void cost_row_scalar(double* out, const double* z, const double* soa, std::size_t dim,
                     std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) acc = std::fma(z[k], soa[k * n + j], acc);
    const double c = std::clamp(acc, -1.0, 1.0);
    const double a = std::acos(c);
    out[j] = 0.5 * a * a;
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{relax_scan_scalar, colmin_update_scalar, cost_row_scalar, "scalar"};
  return ops;
}

namespace {

const Ops& select_ops() {
  const char* env = std::getenv("SPHOT_KERNEL");
  const std::string_view want = env ? env : "";
  if (want == "scalar") return scalar_ops();
#if defined(__x86_64__) || defined(_M_X64)
  if (want == "avx2") return avx2_ops();
  if (want.empty() && avx2_available()) return avx2_ops();
#endif
  return scalar_ops();
}

}  // namespace

const Ops& active_ops() {
  static const Ops& ops = select_ops();
  return ops;
}

}  // namespace sphot::kernels
