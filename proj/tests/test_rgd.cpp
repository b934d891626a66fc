#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "swlab/dynamics/exact.hpp"
#include "swlab/dynamics/ising.hpp"
#include "swlab/dynamics/rgd.hpp"
#include "swlab/instance/instance.hpp"
#include "swlab/scalar/overlap.hpp"

using namespace swlab::dynamics;
using swlab::instance::SpikedInstance;
using swlab::instance::Spins;
using swlab::instance::SymMatrix;

TEST_CASE("mean-field roots match the frozen references") {
  CHECK(curie_weiss_root(0.5, 0.2) == doctest::Approx(oracle::kCwRoot_05_02).epsilon(1e-12));
  CHECK(curie_weiss_root(2.0, 0.0) == doctest::Approx(oracle::kCwRoot_20_00).epsilon(1e-12));
  CHECK(curie_weiss_root(0.5, 0.0) == doctest::Approx(0.0).epsilon(1e-10));
  // Root actually solves its equation.
  const double m = curie_weiss_root(1.7, 0.1);
  CHECK(m == doctest::Approx(std::tanh(1.7 * m + 0.1)).epsilon(1e-12));
}

TEST_CASE("mean-field resampling chain: shape, determinism, convergence") {
  const std::size_t n = 2000;
  const std::uint64_t t_steps = 150;
  const Trajectory a = curie_weiss_rgd(0.5, 0.2, n, t_steps, 99);
  REQUIRE(a.entries.size() == t_steps + 1);
  CHECK(a.entries.front().step == 0);
  CHECK_FALSE(a.entries.front().z_field.has_value());
  for (std::size_t i = 1; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].step == i);
    CHECK(a.entries[i].z_field.has_value());
    const double mm = a.entries[i].correlation;
    // Recorded energy follows the declared per-entry formula.
    CHECK(a.entries[i].energy ==
          doctest::Approx(n * (0.5 * 0.5 * mm * mm + 0.2 * mm)).epsilon(1e-9));
  }
  const Trajectory b = curie_weiss_rgd(0.5, 0.2, n, t_steps, 99);
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    CHECK(a.entries[i].correlation == b.entries[i].correlation);

  CHECK(std::abs(a.entries.back().correlation - oracle::kCwRoot_05_02) < 0.02);

  const Trajectory c = curie_weiss_rgd(2.0, 0.0, n, t_steps, 7);
  CHECK(std::abs(std::abs(c.entries.back().correlation) - oracle::kCwRoot_20_00) < 0.02);
}

TEST_CASE("outer step: reported quantities are internally consistent") {
  const std::size_t n = 200;
  const SpikedInstance inst = swlab::instance::assemble(n, 2.0, 11);
  const Spins sigma = random_spins(n, 3);
  const double beta = 0.8;

  const RgdStepResult r1 = rgd_step(sigma, inst, beta, 4000, 55);
  const RgdStepResult r2 = rgd_step(sigma, inst, beta, 4000, 55);
  CHECK(r1.sigma == r2.sigma);
  CHECK(r1.z == r2.z);

  CHECK(r1.r_before ==
        doctest::Approx(swlab::instance::correlation(sigma, inst.spike)).epsilon(1e-14));
  const double bl = beta * inst.lambda;
  CHECK(r1.z == doctest::Approx(bl * r1.r_before +
                                std::sqrt(bl / static_cast<double>(n)) * r1.g)
                    .epsilon(1e-12));
  for (double v : r1.sigma) CHECK(std::abs(v) == 1.0);
}

TEST_CASE("iterated outer dynamics reaches the predicted overlap") {
  const std::size_t n = 400;
  const double beta = 0.8, lambda = 2.0;
  const SpikedInstance inst = swlab::instance::assemble(n, lambda, 21);
  const Trajectory traj = rgd_run(random_spins(n, 5), inst, beta, 60, 0, 77);
  REQUIRE(traj.entries.size() == 61);
  CHECK(traj.entries.front().step == 0);
  CHECK_FALSE(traj.entries.front().z_field.has_value());
  for (std::size_t i = 1; i < traj.entries.size(); ++i) {
    CHECK(traj.entries[i].z_field.has_value());
    CHECK(std::abs(traj.entries[i].correlation) <= 1.0);
  }
  CHECK(std::abs(std::abs(traj.entries.back().correlation) - oracle::kOpt_08_20) < 0.08);

  // Same seed, same path.
  const Trajectory again = rgd_run(random_spins(n, 5), inst, beta, 60, 0, 77);
  CHECK(again.entries.back().correlation == traj.entries.back().correlation);
}

TEST_CASE("projected one-dimensional step") {
  const std::size_t n = 400;
  const SymMatrix noise = swlab::instance::sample_goe(n, 13);
  const double out = prgd_step(0.6, noise, 0.8, 2.0, 0, 91);
  CHECK(out == prgd_step(0.6, noise, 0.8, 2.0, 0, 91));
  CHECK(std::abs(out) <= 1.0);
  CHECK_THROWS_AS(prgd_step(1.5, noise, 0.8, 2.0, 0, 91), std::invalid_argument);
  CHECK_THROWS_AS(prgd_step(-1.01, noise, 0.8, 2.0, 0, 91), std::invalid_argument);
}

TEST_CASE("exact two-stage kernel: structure and stationarity") {
  const std::size_t n = 6;
  const double beta = 0.4;
  const SpikedInstance inst = swlab::instance::assemble(n, 2.0, 17);
  const TwoStageExactKernel kernel = rgd_exact_kernel(inst, beta);
  const std::size_t states = 1u << n;

  REQUIRE(kernel.rows.size() == n + 1);
  REQUIRE(kernel.stationary.size() == states);
  REQUIRE(kernel.class_of_state.size() == states);

  double mass = 0.0;
  for (double p : kernel.stationary) {
    CHECK(p > 0.0);
    mass += p;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

  for (const auto& row : kernel.rows) {
    double s = 0.0;
    for (double p : row) {
      CHECK(p >= 0.0);
      s += p;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }

  for (std::uint32_t s = 0; s < states; ++s) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      c += ((s >> i) & 1u ? 1.0 : -1.0) * inst.spike[i];
    CHECK(kernel.class_of_state[s] == static_cast<std::uint8_t>((c + n) / 2));
    CHECK(&kernel.row_for(s) == &kernel.rows[kernel.class_of_state[s]]);
  }

  // The stationary law is the enumerated posterior.
  IsingModel posterior;
  posterior.j = inst.m_matrix;
  posterior.h.assign(n, 0.0);
  const ExactResult ex = exact_enumerate(posterior, beta);
  for (std::uint32_t s = 0; s < states; ++s)
    CHECK(kernel.stationary[s] == doctest::Approx(ex.distribution[s]).epsilon(1e-11));

  CHECK(stationarity_residual(kernel) <= 1e-6);
}

TEST_CASE("tv distance") {
  CHECK(tv_distance({0.5, 0.5}, {0.5, 0.5}) == 0.0);
  CHECK(tv_distance({1.0, 0.0}, {0.0, 1.0}) == 1.0);
  CHECK(tv_distance({0.7, 0.3}, {0.4, 0.6}) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("dirichlet diagnostic for the two-stage kernel") {
  const std::size_t n = 6;
  const double beta = 0.5;
  const SpikedInstance inst = swlab::instance::assemble(n, 1.5, 19);
  const TwoStageExactKernel kernel = rgd_exact_kernel(inst, beta);
  const std::size_t states = 1u << n;

  CHECK(dirichlet_diagnostic(inst, beta, kernel.stationary) ==
        doctest::Approx(0.0).epsilon(1e-10));

  // Point mass at the stationary mode, averaged over a short horizon: the
  // time-averaged density obeys the log-Sobolev-free decay bound
  // E(f, log f) <= KL(nu_0 || pi)/T <= n log 2 / T.
  const std::size_t mode = static_cast<std::size_t>(
      std::max_element(kernel.stationary.begin(), kernel.stationary.end()) -
      kernel.stationary.begin());
  const std::size_t horizon = 8;
  std::vector<double> cur(states, 0.0);
  cur[mode] = 1.0;
  std::vector<double> avg(states, 0.0);
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t s = 0; s < states; ++s) avg[s] += cur[s] / static_cast<double>(horizon);
    std::vector<double> next(states, 0.0);
    for (std::size_t s = 0; s < states; ++s) {
      const auto& row = kernel.row_for(static_cast<std::uint32_t>(s));
      for (std::size_t t2 = 0; t2 < states; ++t2) next[t2] += cur[s] * row[t2];
    }
    cur = std::move(next);
  }
  const double bound = static_cast<double>(n) * std::log(2.0) / static_cast<double>(horizon);
  const double value = dirichlet_diagnostic(inst, beta, avg);
  CHECK(value >= 0.0);
  CHECK(value <= bound + 1e-9);

  std::vector<double> unnorm(states, 1.0);
  CHECK_THROWS_AS(dirichlet_diagnostic(inst, beta, unnorm), std::invalid_argument);
  std::vector<double> point(states, 0.0);
  point[0] = 1.0;
  CHECK_THROWS_AS(dirichlet_diagnostic(inst, beta, point), std::domain_error);
}

TEST_CASE("replica overlap concentrates at the solved q") {
  const std::size_t n = 300;
  const double beta = 0.5, h = 0.3;
  const SymMatrix noise = swlab::instance::sample_goe(n, 23);
  const OverlapProbeResult probe = overlap_concentration_probe(noise, beta, h, 6, 0, 15);
  REQUIRE(probe.overlaps.size() == 6);
  CHECK(probe.q_predicted ==
        doctest::Approx(swlab::scalar::solve_q(beta, h).q).epsilon(1e-13));
  CHECK(probe.q_predicted == doctest::Approx(oracle::kQ_05_03).epsilon(1e-9));
  CHECK(std::abs(probe.mean_overlap - probe.q_predicted) < 0.05);
  CHECK(probe.var_overlap < 0.01);
  CHECK_THROWS_AS(overlap_concentration_probe(noise, beta, h, 1, 0, 15), std::invalid_argument);
}
