#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "swlab/scalar/quadrature.hpp"

using namespace swlab::scalar;

TEST_CASE("rule shape: odd symmetric nodes, normalized weights, caching") {
  for (int n : {21, 101, 201, 501}) {
    const GaussHermite& gh = gauss_hermite(n);
    REQUIRE(gh.nodes.size() == static_cast<std::size_t>(n));
    REQUIRE(gh.weights.size() == static_cast<std::size_t>(n));
    CHECK(gh.nodes[n / 2] == 0.0);  // exact middle zero
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(gh.nodes[i] == -gh.nodes[n - 1 - i]);
      CHECK(gh.weights[i] == gh.weights[n - 1 - i]);
      // Extreme-tail weights of the larger rules underflow to exactly 0.0
      // (the weight function is below DBL_MIN past |x| ~ 38); they must
      // never be negative, and the rule keeps its full mass regardless.
      CHECK(gh.weights[i] >= 0.0);
      if (i > 0) CHECK(gh.nodes[i] > gh.nodes[i - 1]);
      wsum += gh.weights[i];
    }
    CHECK(gh.weights[n / 2] > 0.0);
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(&gauss_hermite(201) == &gauss_hermite(201));  // cached rule is reused

  CHECK_THROWS_AS(gauss_hermite(20), std::invalid_argument);  // even
  CHECK_THROWS_AS(gauss_hermite(5), std::invalid_argument);   // too small
}

TEST_CASE("polynomial moments are exact to machine precision") {
  // A 21-point rule integrates polynomials of degree <= 41 exactly, so the
  // normal moments 1, 3, 15, 105, 945 are machine-accurate.
  const double want[] = {1.0, 3.0, 15.0, 105.0, 945.0};
  for (int k = 1; k <= 5; ++k) {
    const double got = gauss_expect([k](double g) { return std::pow(g, 2 * k); }, 21);
    CHECK(got == doctest::Approx(want[k - 1]).epsilon(1e-13));
  }
  CHECK(gauss_expect([](double g) { return g; }, 21) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("analytic expectations") {
  // E cos(g) = exp(-1/2) for a standard normal.
  CHECK(gauss_expect([](double g) { return std::cos(g); }, 201) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-13));
  CHECK(gauss_expect([](double g) { return std::exp(0.3 * g); }, 201) ==
        doctest::Approx(std::exp(0.5 * 0.3 * 0.3)).epsilon(1e-13));
}

TEST_CASE("tanh moments match the frozen references") {
  const double t2 = gauss_expect([](double g) { return std::tanh(g) * std::tanh(g); }, 201);
  const double t4 =
      gauss_expect([](double g) { return std::pow(std::tanh(g), 4); }, 201);
  const double s4 = gauss_expect([](double g) { return std::pow(sech(g), 4); }, 201);
  CHECK(t2 == doctest::Approx(oracle::kETanh2).epsilon(1e-10));
  CHECK(t4 == doctest::Approx(oracle::kETanh4).epsilon(1e-10));
  CHECK(s4 == doctest::Approx(oracle::kESech4).epsilon(1e-10));
}

TEST_CASE("affine expectation and the exact constant shortcut") {
  // a == 0 must evaluate the integrand once at b, exactly.
  const double v = gauss_expect_affine([](double x) { return std::sin(x); }, 0.0, 0.7, 201);
  CHECK(v == std::sin(0.7));

  // Affine reduction agrees with the direct form.
  const double direct =
      gauss_expect([](double g) { return std::tanh(1.3 * g + 0.4); }, 201);
  const double affine =
      gauss_expect_affine([](double x) { return std::tanh(x); }, 1.3, 0.4, 201);
  CHECK(affine == doctest::Approx(direct).epsilon(1e-15));
}

TEST_CASE("non-finite integrands are reported, not propagated") {
  CHECK_THROWS_AS(gauss_expect([](double g) { return 1.0 / (g - g); }, 21), std::runtime_error);
  CHECK_THROWS_AS(gauss_expect_affine([](double) { return std::nan(""); }, 0.0, 1.0, 21),
                  std::runtime_error);
}

TEST_CASE("sech is stable for extreme arguments") {
  CHECK(sech(0.0) == 1.0);
  CHECK(sech(1000.0) == 0.0);
  CHECK(sech(-1000.0) == 0.0);
  CHECK(std::isfinite(sech(710.0)));  // naive 1/cosh overflows here
  for (double x : {-3.0, -1.0, -0.2, 0.4, 2.5}) {
    CHECK(sech(x) == doctest::Approx(1.0 / std::cosh(x)).epsilon(1e-15));
    CHECK(sech(x) == sech(-x));
  }
}
