#pragma once

#include <cstdint>
#include <vector>

#include "sphot/assignment.hpp"
#include "sphot/geometry.hpp"
#include "sphot/grids.hpp"
#include "sphot/models.hpp"

namespace sphot::transport {

/// Optimal coupling of a sample with an equally sized grid.
struct PlainFit {
  std::vector<int> grid_index;  // sample i -> grid position
  double total_cost = 0.0;
};

/// Transport cost matrix entries[i][j] = c(sample_i, grid_j).
assignment::CostMatrix cost_matrix(const Sample& sample, const std::vector<UnitVector>& grid);

PlainFit fit_plain(const Sample& sample, const grids::PlainGrid& grid);

/// Step 1 of the two-step construction: couple the sample with a plain grid
/// and return the image of the sample point closest to the Fréchet mean
/// (first index on ties).
UnitVector estimate_pole(const Sample& sample, std::uint64_t grid_seed);

/// Fitted empirical directional distribution function on the structured
/// parallel-by-meridian grid, with ranks and signs read directly off the
/// grid positions.
class EmpiricalTransport {
 public:
  EmpiricalTransport(Sample sample, grids::StructuredGrid grid, std::vector<int> grid_index,
                     double total_cost);

  int size() const { return static_cast<int>(sample_.size()); }
  int dim() const { return grid_.dim(); }
  const Sample& sample() const { return sample_; }
  const grids::StructuredGrid& grid() const { return grid_; }
  const UnitVector& pole() const { return grid_.pole(); }
  const std::vector<int>& grid_index() const { return grid_index_; }
  const std::vector<int>& ranks() const { return ranks_; }
  const std::vector<std::vector<double>>& signs() const { return signs_; }
  const UnitVector& image(int i) const { return grid_.points()[static_cast<std::size_t>(grid_index_[static_cast<std::size_t>(i)])]; }
  double total_cost() const { return total_cost_; }

 private:
  Sample sample_;
  grids::StructuredGrid grid_;
  std::vector<int> grid_index_;
  std::vector<int> ranks_;
  std::vector<std::vector<double>> signs_;
  double total_cost_;
};

/// Full two-step fit: pole estimation, structured grid, optimal coupling.
EmpiricalTransport fit(const Sample& sample, int n_R, int n_S, int n_0, std::uint64_t seed);

/// Fit against a structured grid built around a caller-supplied pole,
/// skipping Step 1.
EmpiricalTransport fit_with_pole(const Sample& sample, UnitVector pole, int n_R, int n_S,
                                 int n_0);

/// Sample points with rank exactly j (the empirical quantile contour of
/// order j/(n_R+1)); 1 <= j <= n_R.
Sample contour(const EmpiricalTransport& t, int j);

/// Sample points with rank <= j (the empirical quantile region).
Sample region(const EmpiricalTransport& t, int j);

/// The n_R sample points whose images share equator index j_s.
Sample meridian(const EmpiricalTransport& t, int j_s);

/// Plug-in surrogate for the transport median: maximizes, over sample
/// points z, the concordance between the image hemisphere at F(z) and the
/// geodesic hemisphere at z.  Heuristic; the population quantity has no
/// estimator in the reference construction.
UnitVector transport_median(const EmpiricalTransport& t);

}  // namespace sphot::transport
