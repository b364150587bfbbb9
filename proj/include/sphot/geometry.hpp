#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace sphot {

/// A point on the unit hypersphere S^(d-1), d >= 2.
///
/// Construction renormalizes inputs whose Euclidean norm is within 1e-6 of 1
/// (file round-off) and rejects anything farther out (corrupt data).
class UnitVector {
 public:
  explicit UnitVector(std::vector<double> coords);

  int dim() const { return static_cast<int>(c_.size()); }
  double operator[](std::size_t k) const { return c_[k]; }
  const std::vector<double>& coords() const { return c_; }
  std::span<const double> span() const { return c_; }

  static constexpr double kNormTolerance = 1e-6;

 private:
  std::vector<double> c_;
};

/// Tangent-normal split of a unit vector u with respect to a pole:
/// u = latitude * pole + sqrt(1 - latitude^2) * sign, with sign a unit vector
/// in the equatorial hyperplane (the zero vector at u = +/- pole).
struct TangentDecomposition {
  double latitude = 0.0;
  std::vector<double> sign;
};

/// d x (d-1) semi-orthogonal matrix whose columns span the hyperplane
/// orthogonal to the pole: Gamma^T Gamma = I_{d-1}, Gamma Gamma^T = I - tt^T.
/// Built from the Householder reflector mapping the pole onto e_d (onto -e_d
/// when the pole points into the lower half-space, which keeps the reflector
/// well conditioned near -e_d).
class ComplementBasis {
 public:
  explicit ComplementBasis(UnitVector pole);

  const UnitVector& pole() const { return pole_; }
  int dim() const { return pole_.dim(); }

  /// Gamma * s for s in R^{d-1}.
  std::vector<double> apply(std::span<const double> s) const;

  double entry(int row, int col) const { return cols_[static_cast<std::size_t>(col) * dim() + row]; }

 private:
  UnitVector pole_;
  std::vector<double> cols_;  // column-major, d x (d-1)
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

/// |arccos(y . z)|, with the dot product clamped into [-1, 1].
double geodesic_distance(const UnitVector& y, const UnitVector& z);

/// Squared geodesic distance halved; the transport cost c(y, z).
double transport_cost(const UnitVector& y, const UnitVector& z);

/// Latitude u.pole and unit equatorial sign, with the 0/0 = 0 convention at
/// the poles (residual norm below 1e-12 yields the zero sign).
TangentDecomposition tangent_decompose(const UnitVector& u, const UnitVector& pole);

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Rotation by pi*xi/15 about e_3 (d = 3).
Matrix3 rotation_z(double xi);

UnitVector rotate(const Matrix3& m, const UnitVector& z);

}  // namespace sphot
