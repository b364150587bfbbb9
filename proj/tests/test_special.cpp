#include <doctest.h>

#include <cmath>

#include "sphot/rng.hpp"
#include "sphot/special.hpp"

#include "oracles.hpp"

using namespace sphot;

TEST_CASE("incomplete gamma basics") {
  CHECK(special::gamma_p(1.0, 0.0) == 0.0);
  CHECK(special::gamma_q(1.0, 0.0) == 1.0);
  // P(1, x) = 1 - e^{-x}
  for (const double x : {0.1, 1.0, 3.0, 10.0})
    CHECK(special::gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double a = 0.25 + 8.0 * rng.uniform01();
    const double x = 12.0 * rng.uniform01();
    CHECK(special::gamma_p(a, x) + special::gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("chi-square tail and quantile") {
  CHECK(special::chi2_sf(0.0, 3) == 1.0);
  CHECK(special::chi2_quantile(0.95, 1) == doctest::Approx(3.8415).epsilon(1e-3 / 3.8415));
  SUBCASE("inverse identity") {
    Rng rng(12);
    for (int i = 0; i < 100; ++i) {
      const int df = 1 + static_cast<int>(rng.uniform_below(12));
      const double x = 0.05 + 25.0 * rng.uniform01();
      const double p = special::chi2_cdf(x, df);
      if (p <= 1e-12 || p >= 1.0 - 1e-12) continue;
      CHECK(special::chi2_quantile(p, df) == doctest::Approx(x).epsilon(1e-8));
    }
  }
  SUBCASE("matches the series-plus-bisection oracle") {
    for (int df = 1; df <= 10; ++df) {
      const double mine = special::chi2_quantile(0.95, df);
      const double ref = oracles::chi2_quantile_bisect(0.95, df);
      CHECK(std::abs(mine - ref) <= 1e-6);
    }
  }
  CHECK_THROWS(special::chi2_quantile(0.0, 3));
  CHECK_THROWS(special::chi2_quantile(1.0, 3));
  CHECK_THROWS(special::chi2_quantile(0.5, 0));
}

TEST_CASE("adaptive quadrature") {
  // smooth integrand with a known value
  auto f = [](double x, const void*) { return std::sin(x); };
  const double got = special::integrate(f, nullptr, 0.0, M_PI, 1e-12);
  CHECK(got == doctest::Approx(2.0).epsilon(1e-12));
}
