#include "sphot/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sphot/kernels.hpp"

namespace sphot::assignment {

CostMatrix::CostMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), e_(std::move(entries)) {
  if (n_ == 0) throw std::invalid_argument("CostMatrix: empty");
  if (e_.size() != n_ * n_) throw std::invalid_argument("CostMatrix: not square");
  for (double x : e_)
    if (!std::isfinite(x)) throw std::invalid_argument("CostMatrix: non-finite entry");
}

Assignment solve(const CostMatrix& cost) {
  const std::size_t n = cost.size();
  const auto& ops = kernels::active_ops();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> v(n, 0.0);
  std::vector<int> rowsol(n, -1), colsol(n, -1);

  // Column reduction, computed row-wise so the matrix is traversed in order.
  {
    std::vector<double> colmin(n, kInf);
    std::vector<std::int64_t> colarg(n, -1);
    for (std::size_t i = 0; i < n; ++i)
      ops.colmin_update(colmin.data(), colarg.data(), cost.row(i), static_cast<std::int64_t>(i), n);
    std::vector<int> matches(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      v[j] = colmin[j];
      const int i = static_cast<int>(colarg[j]);
      if (matches[static_cast<std::size_t>(i)]++ == 0) {
        rowsol[static_cast<std::size_t>(i)] = static_cast<int>(j);
        colsol[j] = i;
      }
    }
  }

  std::vector<int> free_rows;
  for (std::size_t i = 0; i < n; ++i)
    if (rowsol[i] < 0) free_rows.push_back(static_cast<int>(i));

  // Augmenting row reduction, two passes.  A bumped row re-enters the
  // current pass at most once: with continuous costs the textbook unbounded
  // retry can cycle for a long time on vanishing potential decrements, and
  // the shortest-path phase handles leftovers at the same optimum anyway.
  std::vector<int> retries(n, 0);
  for (int pass = 0; pass < 2 && !free_rows.empty(); ++pass) {
    std::vector<int> next_free;
    std::size_t k = 0;
    while (k < free_rows.size()) {
      const int i = free_rows[k++];
      const double* row = cost.row(static_cast<std::size_t>(i));
      double umin = row[0] - v[0], usub = kInf;
      std::size_t j1 = 0, j2 = n;  // j2 == n means "no second column yet"
      for (std::size_t j = 1; j < n; ++j) {
        const double h = row[j] - v[j];
        if (h < usub) {
          if (h >= umin) {
            usub = h;
            j2 = j;
          } else {
            usub = umin;
            j2 = j1;
            umin = h;
            j1 = j;
          }
        }
      }
      int bumped = colsol[j1];
      if (umin < usub) {
        v[j1] -= usub - umin;
      } else if (bumped >= 0 && j2 < n) {
        j1 = j2;
        bumped = colsol[j1];
      }
      rowsol[static_cast<std::size_t>(i)] = static_cast<int>(j1);
      colsol[j1] = i;
      if (bumped >= 0) {
        rowsol[static_cast<std::size_t>(bumped)] = -1;
        if (umin < usub && retries[static_cast<std::size_t>(bumped)]++ < 1)
          free_rows[--k] = bumped;  // retry within this pass
        else
          next_free.push_back(bumped);
      }
    }
    free_rows = std::move(next_free);
  }

  // Shortest augmenting paths for the remaining rows.  The Dijkstra state is
  // dense; the fused relax/argmin kernel does the per-round column scan.
  std::vector<double> dist(n);
  std::vector<std::int64_t> pred(n);
  std::vector<std::uint64_t> done(n);
  for (const int f : free_rows) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(done.begin(), done.end(), 0);
    kernels::MinLoc m = ops.relax_scan(dist.data(), pred.data(),
                                       cost.row(static_cast<std::size_t>(f)), v.data(),
                                       done.data(), 0.0, f, n);
    std::ptrdiff_t endofpath = -1;
    double minfinal = 0.0;
    for (;;) {
      if (m.index < 0) throw std::runtime_error("assignment: no augmenting path");
      const std::size_t j = static_cast<std::size_t>(m.index);
      if (colsol[j] < 0) {
        endofpath = m.index;
        minfinal = m.value;
        break;
      }
      done[j] = ~std::uint64_t{0};
      const int i2 = colsol[j];
      const double* row = cost.row(static_cast<std::size_t>(i2));
      const double base = m.value - (row[j] - v[j]);
      m = ops.relax_scan(dist.data(), pred.data(), row, v.data(), done.data(), base, i2, n);
    }
    for (std::size_t j = 0; j < n; ++j)
      if (done[j]) v[j] += dist[j] - minfinal;
    // Walk the alternating path back to the free row.
    std::ptrdiff_t j = endofpath;
    for (;;) {
      const int i = static_cast<int>(pred[static_cast<std::size_t>(j)]);
      colsol[static_cast<std::size_t>(j)] = i;
      const int old = rowsol[static_cast<std::size_t>(i)];
      rowsol[static_cast<std::size_t>(i)] = static_cast<int>(j);
      if (i == f) break;
      j = old;
    }
  }

  Assignment out;
  out.perm = std::move(rowsol);
  for (std::size_t i = 0; i < n; ++i) out.total_cost += cost.at(i, static_cast<std::size_t>(out.perm[i]));
  return out;
}

Assignment brute_force(const CostMatrix& cost) {
  const std::size_t n = cost.size();
  if (n > 9) throw std::invalid_argument("brute_force: n > 9");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c += cost.at(i, static_cast<std::size_t>(perm[i]));
    if (c < best_cost) {
      best_cost = c;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {std::move(best), best_cost};
}

}  // namespace sphot::assignment
