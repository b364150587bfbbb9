#pragma once

#include <cstddef>
#include <vector>

namespace sphot::assignment {

/// Dense square cost matrix, row-major.  Entries must be finite and are
/// expected to lie in [0, pi^2/2] when they come from transport costs.
class CostMatrix {
 public:
  CostMatrix(std::size_t n, std::vector<double> entries);

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }
  const double* row(std::size_t i) const { return e_.data() + i * n_; }
  const std::vector<double>& entries() const { return e_; }

 private:
  std::size_t n_;
  std::vector<double> e_;
};

struct Assignment {
  std::vector<int> perm;  // perm[i] = column assigned to row i
  double total_cost = 0.0;
};

/// Exact solver for the linear assignment problem (Jonker-Volgenant shortest
/// augmenting path, O(n^3)).  Deterministic: ties are resolved by the solver's
/// fixed ascending scan order, so equal inputs give equal outputs.
Assignment solve(const CostMatrix& cost);

/// Exhaustive-search reference, n <= 9.  Returns the lexicographically
/// smallest optimal permutation.
Assignment brute_force(const CostMatrix& cost);

}  // namespace sphot::assignment
