#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sphot/models.hpp"
#include "sphot/transport.hpp"

namespace sphot::manova {

/// m >= 2 independent groups; the pooled order is group 1 first, ..., group
/// m last (the transport is always fitted on the pooled sample).
struct PooledSample {
  std::vector<Sample> groups;

  Sample pooled() const;
  std::vector<int> sizes() const;
  int total() const;
  int dim() const;
  void validate() const;
};

enum class ScoreKind { kUniform, kVmfLocation, kVmfConcentration, kVmfLocationConcentration };

std::string score_name(ScoreKind kind);
ScoreKind score_from_name(const std::string& name);

/// Score function J: grid position -> R^{d_J}, with the fitted context
/// (pole, kappa_hat, n_R) the estimated vMF scores need.
struct ScoreFunction {
  ScoreKind kind;
  int d_J;
  double kappa_hat = 0.0;   // unused by the uniform score
  std::vector<double> g;    // cached G_kappa^{-1}(1 - r/(n_R+1)), r = 0..n_R
};

ScoreFunction make_score(ScoreKind kind, const transport::EmpiricalTransport& t,
                         double kappa_hat);

/// Score vector of one grid position.
std::vector<double> score_at(const grids::StructuredGrid& grid, int pos,
                             const ScoreFunction& score);

/// Scores of the fitted sample, n x d_J (row ell is J(F^(n)(Y_ell))).
std::vector<std::vector<double>> score_values(const transport::EmpiricalTransport& t,
                                              const ScoreFunction& score);

/// D_J = Var(J(U)): analytic I_d/d for the uniform score, otherwise the
/// empirical covariance of the scores over the n grid positions.  Row-major
/// d_J x d_J.
std::vector<double> d_matrix(const ScoreFunction& score, const grids::StructuredGrid& grid);

/// Moore-Penrose inverse of a symmetric PSD matrix (Jacobi eigenvalues;
/// eigenvalues below 1e-10 * lambda_max count as zero).  Returns the inverse
/// and the numerical rank.
std::pair<std::vector<double>, int> pseudo_inverse(const std::vector<double>& m, int k);

/// The quadratic form Q = sum_i Delta_i^T Dinv Delta_i assembled from raw
/// score values (row ell = J(F^(n)(Y_ell))) and group sizes in pooled order.
/// Exposed so the zero-sum-weight invariance can be checked directly.
double q_form(const std::vector<std::vector<double>>& values, const std::vector<int>& sizes,
              const std::vector<double>& dinv, int d_J);

struct ManovaReport {
  std::string method;
  std::string score;
  double statistic = 0.0;  // Q_J or Q^(n)
  int df = 0;
  int d_star = 0;
  double p_value = 1.0;
  double alpha = 0.05;
  bool reject = false;
  double kappa_hat = 0.0;
  std::vector<std::vector<double>> delta;  // per-group Delta_i components
};

/// Rank-score MANOVA statistic Q_J with its chi-square test.  Fits the
/// pooled transport once.
ManovaReport q_statistic(const PooledSample& pooled, ScoreKind kind, int n_R, int n_S,
                         int n_0, std::uint64_t seed, double alpha = 0.05);

/// Same, reusing an already fitted pooled transport (the fit does not depend
/// on the score, so several scores can share it).
ManovaReport q_statistic_with_fit(const transport::EmpiricalTransport& t,
                                  const std::vector<int>& sizes, ScoreKind kind,
                                  double kappa_hat, double alpha = 0.05);

/// Pseudo-vMF comparator with (m-1)(d-1) degrees of freedom; valid under
/// rotational symmetry only.
ManovaReport pvmf_test(const PooledSample& pooled, double alpha = 0.05);

double chi2_sf(double x, int df);
double chi2_quantile(double p, int df);

}  // namespace sphot::manova
