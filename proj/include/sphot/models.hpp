#pragma once

#include <functional>
#include <vector>

#include "sphot/geometry.hpp"
#include "sphot/rng.hpp"

namespace sphot {
using Sample = std::vector<UnitVector>;
}

namespace sphot::models {

/// CDF on [-1, 1] of the latitude Z^T theta under a rotationally symmetric
/// law: F_* (uniform), G_kappa (von Mises-Fisher), or a custom angular
/// density.  Closed forms are used for d = 2, 3 where available; otherwise
/// the angular integral is evaluated by adaptive quadrature on the smooth
/// colatitude form (substitution s = -cos tau removes the endpoint
/// singularity for every d >= 2).
class LatitudeCdf {
 public:
  static LatitudeCdf uniform(int d);
  static LatitudeCdf vmf(double kappa, int d);
  static LatitudeCdf from_angular_density(std::function<double(double)> f, int d);

  double cdf(double u) const;
  double inverse(double p) const;  // bisection to 1e-12
  int dim() const { return d_; }

 private:
  enum class Kind { kUniform, kVmf, kCustom };
  LatitudeCdf(Kind k, int d, double kappa, std::function<double(double)> f);
  double raw_mass(double u) const;  // unnormalized integral over [-1, u]

  Kind kind_;
  int d_;
  double kappa_ = 0.0;
  std::function<double(double)> f_;
  double norm_ = 1.0;
};

double f_star(double u, int d);
double q_star(double p, int d);
double g_kappa_cdf(double t, double kappa, int d);
double g_kappa_inv(double p, double kappa, int d);

struct VmfParams {
  UnitVector theta;
  double kappa;  // >= 0
};

struct TangentVmfParams {
  UnitVector theta;            // pole, in R^d
  std::vector<double> mu;      // skewness direction, unit in R^{d-1}
  double kappa;                // skewness intensity, >= 0
  double beta_a, beta_b;       // V = 2 Beta(a, b) - 1
};

struct SineSkewParams {
  double mu;          // angular location in [-pi, pi)
  double lambda;      // skewness, |lambda| < 1
  double base_kappa;  // vMF base concentration
};

struct MixtureParams {
  std::vector<double> weights;  // nonnegative, sum 1
  std::vector<std::function<UnitVector(Rng&)>> draw;
};

MixtureParams vmf_mixture(const std::vector<double>& weights,
                          const std::vector<VmfParams>& components);

Sample sample_uniform(int n, int d, Rng& rng);
Sample sample_vmf(int n, const VmfParams& params, Rng& rng);
Sample sample_tangent_vmf(int n, const TangentVmfParams& params, Rng& rng);
Sample sample_sine_skew(int n, const SineSkewParams& params, Rng& rng);
Sample sample_mixture(int n, const MixtureParams& params, Rng& rng);

/// Mean resultant A_d(kappa) = E[Z^T theta] under vMF(theta, kappa).
double vmf_mean_resultant(double kappa, int d);

/// Maximum-likelihood concentration: solves A_d(kappa) = ||sample mean||.
/// Newton iteration from the Banerjee starting point; returns 0 for
/// resultants below 1e-8 and rejects degenerate samples (resultant ~ 1).
double vmf_kappa_mle(const Sample& sample);

/// Riemannian gradient descent on the mean squared geodesic distance, with
/// multistart (Euclidean mean plus four fixed-seed random starts).
UnitVector frechet_mean(const Sample& sample);

/// Closed-form directional distribution function under rotational symmetry:
/// F(z) = Q_*(F_f(z.theta)) theta + sqrt(1 - .^2) S_theta(z).
UnitVector rotsym_transport(const UnitVector& z, const UnitVector& theta,
                            const LatitudeCdf& latitude_cdf);

}  // namespace sphot::models
