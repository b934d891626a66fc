#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "swlab/scalar/fixed_point.hpp"
#include "swlab/scalar/overlap.hpp"

using namespace swlab::scalar;

TEST_CASE("update map is odd with an exact zero at the origin") {
  CHECK(f_update(0.0, 0.8, 2.0) == 0.0);
  for (double z : {0.1, 0.35, 0.9}) {
    const double plus = f_update(z, 0.8, 2.0);
    const double minus = f_update(-z, 0.8, 2.0);
    CHECK(plus == -minus);  // computed through |z|, so exact
    CHECK(plus > 0.0);
    CHECK(plus < 1.0);
  }
  CHECK_THROWS_AS(f_update(0.5, -1.0, 2.0), std::invalid_argument);
}

TEST_CASE("origin slope is beta*lambda below the spin-glass temperature") {
  for (double beta : {0.4, 0.8}) {
    for (double lambda : {1.2, 2.0}) {
      const double eps = 1e-6;
      const double slope = (f_update(eps, beta, lambda) - f_update(-eps, beta, lambda)) / (2 * eps);
      CHECK(slope == doctest::Approx(beta * lambda).epsilon(1e-4));
    }
  }
}

TEST_CASE("largest valid fixed points match the frozen references") {
  const FixedPointReport a = find_opt(0.8, 2.0);
  CHECK(a.opt == doctest::Approx(oracle::kOpt_08_20).epsilon(1e-9));
  CHECK(a.regime == Regime::SuperCriticalHighTemp);

  const FixedPointReport b = find_opt(0.6, 2.0);
  CHECK(b.opt == doctest::Approx(oracle::kOpt_06_20).epsilon(1e-9));
  CHECK(b.regime == Regime::SuperCriticalHighTemp);

  const FixedPointReport c = find_opt(0.9, 2.5);
  CHECK(c.opt == doctest::Approx(oracle::kOpt_09_25).epsilon(1e-9));
  CHECK(c.regime == Regime::SuperCriticalHighTemp);
}

TEST_CASE("diagonal beta == lambda fixed points") {
  // 501 nodes: the integrand steepens with beta, and the default rule leaves
  // ~1e-8 in the beta = 3 root, just past the gate used here.
  ModelParams p;
  p.quad_nodes = 501;
  const struct {
    double bl, zstar;
  } cases[] = {{1.2, oracle::kZstar_12},
               {1.5, oracle::kZstar_15},
               {2.0, oracle::kZstar_20},
               {3.0, oracle::kZstar_30}};
  for (const auto& cs : cases) {
    const FixedPointReport r = find_opt(cs.bl, cs.bl, p);
    CHECK(r.opt == doctest::Approx(cs.zstar).epsilon(1e-9));
    CHECK(r.regime == Regime::LowTempWithFP);
    // Self-consistency through an independent evaluation of the map.
    CHECK(f_update(r.opt, cs.bl, cs.bl, p) == doctest::Approx(r.opt).epsilon(1e-9));
  }
}

TEST_CASE("regime classification") {
  CHECK(find_opt(0.5, 1.5).regime == Regime::SubCritical);  // beta*lambda = 0.75
  CHECK(find_opt(0.5, 1.5).opt == 0.0);
  CHECK(find_opt(1.0, 1.0).regime == Regime::SuperCriticalHighTemp);  // boundary
  CHECK(find_opt(1.5, 1.5).regime == Regime::LowTempWithFP);

  // Far below the temperature where the stability margin at the planted root
  // dies, there is no admissible positive fixed point left. The margin
  // integrand at beta = 12 is a bump of width ~1/beta in the Gaussian
  // variable, so this needs a dense rule (the margin converges to -0.074;
  // coarse rules cannot resolve the bump and report it positive).
  ModelParams dense;
  dense.quad_nodes = 2001;
  const FixedPointReport frozen = find_opt(12.0, 2.0, dense);
  CHECK(frozen.regime == Regime::LowTempNoFP);
  CHECK(frozen.opt == 0.0);
  REQUIRE(frozen.fixed_points.size() == 2);
  CHECK(frozen.fixed_points[1].z == doctest::Approx(0.9408).epsilon(1e-3));
  CHECK(frozen.fixed_points[1].at_margin < -0.05);

  CHECK(regime_name(Regime::SubCritical) == "SubCritical");
  CHECK(regime_name(Regime::SuperCriticalHighTemp) == "SuperCriticalHighTemp");
  CHECK(regime_name(Regime::LowTempWithFP) == "LowTempWithFP");
  CHECK(regime_name(Regime::LowTempNoFP) == "LowTempNoFP");
}

TEST_CASE("report bookkeeping: roots ascend, origin always present") {
  const FixedPointReport r = find_opt(0.8, 2.0);
  REQUIRE(!r.fixed_points.empty());
  CHECK(r.fixed_points.front().z == 0.0);
  for (std::size_t i = 1; i < r.fixed_points.size(); ++i)
    CHECK(r.fixed_points[i].z > r.fixed_points[i - 1].z);
  // In the supercritical high-temperature phase the origin repels and the
  // positive fixed point attracts.
  CHECK(std::abs(r.fixed_points.front().derivative) > 1.0);
  const FixedPointInfo& top = r.fixed_points.back();
  CHECK(top.stable);
  CHECK(top.at_satisfied);
  CHECK(top.at_margin == doctest::Approx(at_condition(0.8, 1.6 * top.z).margin).epsilon(1e-12));
}

TEST_CASE("subcritical map contracts to zero") {
  // beta*lambda < 1: iterating the map from a warm start decays to zero.
  double z = 0.9;
  for (int i = 0; i < 200; ++i) z = f_update(z, 0.5, 1.5);
  CHECK(std::abs(z) < 1e-6);
}
