#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sphot/models.hpp"

namespace sphot::experiments {

/// One data-generating process of the simulation study.
struct DgpSpec {
  std::string label;
  int d;
  std::function<Sample(int n, Rng& rng)> draw;
};

/// d = 3 uniformity-study rows: uniform, vMF, tangent vMF, vMF mixtures,
/// vMF + tangent mixtures.
std::vector<DgpSpec> table1_dgps();

/// d = 2 rows: uniform, vMF, vMF mixtures, sine-skew.
std::vector<DgpSpec> table2_dgps();

struct RateRow {
  std::string dgp;
  std::string test;
  double rate = 0.0;
  int n_reps = 0;
  std::uint64_t seed = 0;
};

/// Rejection frequencies of the transport CvM test and the Rayleigh baseline
/// at alpha = 0.05.  The Monte Carlo critical value is computed once per
/// call (it depends only on n, d and the grid shape) and shared across rows.
std::vector<RateRow> gof_rejection_rates(const std::vector<DgpSpec>& dgps, int n, int n_reps,
                                         int n_mc, std::uint64_t seed, unsigned threads = 0);

/// Two-sample MANOVA DGP, parameterized by the treatment intensity xi.
struct TwoSampleDgp {
  std::function<Sample(int n, Rng& rng)> group1;
  std::function<Sample(int n, Rng& rng)> group2;
};

/// The four simulation cases: (1) vMF location shift, (2) vMF concentration
/// shift, (3) rotated three-component vMF mixture, (4) tangent vMF skewness
/// shift.
TwoSampleDgp manova_case(int case_id, double xi);

/// xi grids used in the study, per case.
std::vector<double> manova_case_xis(int case_id);

struct PowerRow {
  double xi = 0.0;
  std::string score;  // the four rank scores plus "pvmf"
  double rate = 0.0;
  int n_reps = 0;
  std::uint64_t seed = 0;
};

/// Rejection frequencies of the four rank-score tests and the pvMF test at
/// alpha = 0.05, n = (500, 600), grid (44, 25, 0).
std::vector<PowerRow> manova_rejection_rates(int case_id, const std::vector<double>& xis,
                                             int n_reps, std::uint64_t seed,
                                             unsigned threads = 0, int n1 = 500, int n2 = 600);

}  // namespace sphot::experiments
