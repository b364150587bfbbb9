#pragma once

#include <cstdint>
#include <vector>

#include "sphot/geometry.hpp"
#include "sphot/models.hpp"

namespace sphot::grids {

/// Quasi-uniform n-point target grid for the first coupling step.  For d = 3
/// this is the spherical Fibonacci lattice (deterministic, the seed is
/// ignored); for other d it is a seeded i.i.d. uniform draw, which satisfies
/// the weak-convergence requirement almost surely.
struct PlainGrid {
  std::vector<UnitVector> points;
  std::uint64_t seed = 0;
};

PlainGrid plain_grid(int n, int d, std::uint64_t seed);

/// Reference grid on the equatorial sphere S^(d-2), returned as
/// (d-1)-dimensional unit vectors.  d = 3: n_S equispaced points on the
/// circle starting at (1, 0), counterclockwise.  d = 2: S^0 = {+1, -1},
/// n_S <= 2.  d > 3: plain_grid(n_S, d-1) with a fixed seed.
std::vector<std::vector<double>> equator_grid(int n_S, int d);

/// Product grid of Step 2: n_0 pole copies first, then the n_R x n_S points
/// ordered latitude-major.  Latitudes satisfy 1 - F_*(u_i) = i/(n_R+1).
class StructuredGrid {
 public:
  StructuredGrid(UnitVector pole, int n_R, int n_S, int n_0);

  int size() const { return n_R_ * n_S_ + n_0_; }
  int dim() const { return pole_.dim(); }
  int n_R() const { return n_R_; }
  int n_S() const { return n_S_; }
  int n_0() const { return n_0_; }
  const UnitVector& pole() const { return pole_; }
  const ComplementBasis& basis() const { return basis_; }
  const std::vector<UnitVector>& points() const { return points_; }
  const std::vector<std::vector<double>>& equator() const { return equator_; }
  const std::vector<double>& latitudes() const { return latitudes_; }  // u_1..u_{n_R}

  /// Rank of a grid position: 0 for pole copies, else the latitude index i.
  int rank_of(int pos) const { return pos < n_0_ ? 0 : 1 + (pos - n_0_) / n_S_; }

  /// Meridian (equator grid) index of a grid position; -1 for pole copies.
  int meridian_of(int pos) const { return pos < n_0_ ? -1 : (pos - n_0_) % n_S_; }

  /// Ambient-space sign vector of a grid position (zero for pole copies).
  std::vector<double> sign_of(int pos) const;

 private:
  UnitVector pole_;
  ComplementBasis basis_;
  std::vector<std::vector<double>> equator_;
  int n_R_, n_S_, n_0_;
  std::vector<double> latitudes_;
  std::vector<UnitVector> points_;
};

struct GridShape {
  int n_R = 0, n_S = 0, n_0 = 0;
};

/// Convenience factorization n = n_R n_S + n_0 with n_S ~ sqrt(n)
/// (n_S = 2 for d = 2, where the equator is S^0).  Not paper-mandated; the
/// caller can always choose the factorization explicitly.
GridShape auto_shape(int n, int d);

}  // namespace sphot::grids
