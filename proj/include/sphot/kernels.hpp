#pragma once

#include <cstddef>
#include <cstdint>

namespace sphot::kernels {

/// Result of a masked argmin scan.  index is -1 when every entry was masked.
struct MinLoc {
  double value;
  std::ptrdiff_t index;
};

/// Fused relax-and-argmin pass over the dense shortest-path state of the
/// assignment solver.  For every j with done[j] == 0:
///
///   t = base + cost[j] - v[j];  if (t < dist[j]) { dist[j] = t; pred[j] = tag; }
///
/// and the returned MinLoc is the minimum of dist[j] over the not-done j,
/// with the smallest attaining index.  done[j] is 0 (open) or ~0 (closed).
///
/// All variants are required to produce bit-identical dist/pred/MinLoc.
using RelaxScanFn = MinLoc (*)(double* dist, std::int64_t* pred, const double* cost,
                               const double* v, const std::uint64_t* done, double base,
                               std::int64_t tag, std::size_t n);

/// Running column minimum over rows of a cost matrix:
///   if (row[j] < colmin[j]) { colmin[j] = row[j]; colarg[j] = i; }
/// Strict comparison keeps the first (smallest) row index on ties.
using ColMinFn = void (*)(double* colmin, std::int64_t* colarg, const double* row,
                          std::int64_t i, std::size_t n);

/// Transport-cost row against a structure-of-arrays grid:
///   out[j] = 0.5 * acos(clamp(sum_k z[k] * soa[k*n + j], -1, 1))^2
/// The dot product accumulates plane by plane with fused multiply-adds in
/// both variants so the results agree bitwise.
using CostRowFn = void (*)(double* out, const double* z, const double* soa,
                           std::size_t dim, std::size_t n);

struct Ops {
  RelaxScanFn relax_scan;
  ColMinFn colmin_update;
  CostRowFn cost_row;
  const char* name;
};

const Ops& scalar_ops();

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_available();
const Ops& avx2_ops();
#endif

/// Variant selected at startup: the widest supported instruction set, unless
/// the SPHOT_KERNEL environment variable ("scalar", "avx2") overrides it.
const Ops& active_ops();

}  // namespace sphot::kernels
