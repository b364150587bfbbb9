#include "sphot/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sphot {

UnitVector::UnitVector(std::vector<double> coords) : c_(std::move(coords)) {
  if (c_.size() < 2) throw std::invalid_argument("UnitVector: dimension must be >= 2");
  const double r = norm(c_);
  if (!std::isfinite(r) || std::abs(r - 1.0) > kNormTolerance)
    throw std::invalid_argument("UnitVector: norm deviates from 1 beyond tolerance");
  for (double& x : c_) x /= r;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

namespace {

void check_same_dim(const UnitVector& y, const UnitVector& z) {
  if (y.dim() != z.dim()) throw std::invalid_argument("dimension mismatch");
}

}  // namespace

double geodesic_distance(const UnitVector& y, const UnitVector& z) {
  check_same_dim(y, z);
  const double c = std::clamp(dot(y.span(), z.span()), -1.0, 1.0);
  return std::abs(std::acos(c));
}

double transport_cost(const UnitVector& y, const UnitVector& z) {
  const double d = geodesic_distance(y, z);
  return 0.5 * d * d;
}

TangentDecomposition tangent_decompose(const UnitVector& u, const UnitVector& pole) {
  check_same_dim(u, pole);
  const int d = u.dim();
  TangentDecomposition out;
  out.latitude = std::clamp(dot(u.span(), pole.span()), -1.0, 1.0);
  out.sign.assign(static_cast<std::size_t>(d), 0.0);
  for (int k = 0; k < d; ++k) out.sign[k] = u[k] - out.latitude * pole[k];
  const double r = norm(out.sign);
  if (r < 1e-12) {
    std::fill(out.sign.begin(), out.sign.end(), 0.0);  // 0/0 = 0 at the poles
  } else {
    for (double& x : out.sign) x /= r;
  }
  return out;
}

ComplementBasis::ComplementBasis(UnitVector pole) : pole_(std::move(pole)) {
  const int d = pole_.dim();
  // Reflect the pole onto the coordinate axis on the far side: the reflector
  // vector w = pole - s e_d with s = -sign(pole_d) has ||w||^2 >= 2, so the
  // construction never cancels, and at pole = +/- e_d the columns come out
  // exactly canonical.
  const double s = pole_[static_cast<std::size_t>(d) - 1] >= 0.0 ? -1.0 : 1.0;
  std::vector<double> w(pole_.coords());
  w[static_cast<std::size_t>(d) - 1] -= s;
  const double w2 = dot(w, w);
  cols_.assign(static_cast<std::size_t>(d) * (d - 1), 0.0);
  for (int c = 0; c < d - 1; ++c) {
    double* col = cols_.data() + static_cast<std::size_t>(c) * d;
    const double f = 2.0 * w[static_cast<std::size_t>(c)] / w2;
    for (int r = 0; r < d; ++r) col[r] = -f * w[static_cast<std::size_t>(r)];
    col[c] += 1.0;
  }
}

std::vector<double> ComplementBasis::apply(std::span<const double> s) const {
  const int d = dim();
  if (static_cast<int>(s.size()) != d - 1)
    throw std::invalid_argument("ComplementBasis::apply: expected a (d-1)-vector");
  std::vector<double> out(static_cast<std::size_t>(d), 0.0);
  for (int c = 0; c < d - 1; ++c) {
    const double* col = cols_.data() + static_cast<std::size_t>(c) * d;
    for (int r = 0; r < d; ++r) out[static_cast<std::size_t>(r)] += col[r] * s[static_cast<std::size_t>(c)];
  }
  return out;
}

Matrix3 rotation_z(double xi) {
  const double a = M_PI * xi / 15.0;
  const double c = std::cos(a), s = std::sin(a);
  return {{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}};
}

UnitVector rotate(const Matrix3& m, const UnitVector& z) {
  if (z.dim() != 3) throw std::invalid_argument("rotate: 3-d rotation applied to non-3-d point");
  std::vector<double> out(3, 0.0);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out[static_cast<std::size_t>(r)] += m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] * z[static_cast<std::size_t>(c)];
  return UnitVector(std::move(out));
}

}  // namespace sphot
