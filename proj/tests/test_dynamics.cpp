#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "swlab/dynamics/exact.hpp"
#include "swlab/dynamics/ising.hpp"
#include "swlab/instance/instance.hpp"
#include "swlab/rng.hpp"

using namespace swlab::dynamics;
using swlab::instance::SymMatrix;
using swlab::instance::Spins;
using swlab::rng::Xoshiro256pp;
using swlab::rng::mix_seed;

namespace {

IsingModel random_model(std::size_t n, std::uint64_t seed, double field) {
  IsingModel m;
  m.j = SymMatrix(n);
  Xoshiro256pp gen(seed);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = gen.gaussian() / std::sqrt(static_cast<double>(n));
      m.j.at(i, j) = v;
      m.j.at(j, i) = v;
    }
  m.h.assign(n, field);
  return m;
}

Spins state_to_spins(std::uint32_t mask, std::size_t n) {
  Spins s(n, -1.0);
  for (std::size_t i = 0; i < n; ++i)
    if (mask & (1u << i)) s[i] = 1.0;
  return s;
}

}  // namespace

TEST_CASE("two-spin enumeration against a hand computation") {
  IsingModel m;
  m.j = SymMatrix(2);
  m.j.at(0, 1) = m.j.at(1, 0) = 0.8;
  m.j.at(0, 0) = 0.3;   // diagonal terms contribute a constant since s_i^2 = 1
  m.j.at(1, 1) = -0.1;
  m.h = {0.4, -0.2};
  const double beta = 0.7;

  double z = 0.0, e_mean = 0.0, mag = 0.0;
  double s0_mean = 0.0, s1_mean = 0.0, overlap = 0.0;
  std::vector<double> weights(4, 0.0);
  for (std::uint32_t mask = 0; mask < 4; ++mask) {
    const Spins s = state_to_spins(mask, 2);
    double quad = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) quad += s[i] * m.j.at(i, j) * s[j];
    const double hh = 0.5 * beta * quad + m.h[0] * s[0] + m.h[1] * s[1];
    weights[mask] = std::exp(hh);
    z += weights[mask];
  }
  for (std::uint32_t mask = 0; mask < 4; ++mask) {
    const Spins s = state_to_spins(mask, 2);
    const double p = weights[mask] / z;
    e_mean += p * std::log(weights[mask]);
    mag += p * 0.5 * (s[0] + s[1]);
    s0_mean += p * s[0];
    s1_mean += p * s[1];
  }
  overlap = 0.5 * (s0_mean * s0_mean + s1_mean * s1_mean);

  const ExactResult r = exact_enumerate(m, beta);
  CHECK(r.partition_log == doctest::Approx(std::log(z)).epsilon(1e-13));
  CHECK(r.energy_mean == doctest::Approx(e_mean).epsilon(1e-12));
  CHECK(r.magnetization == doctest::Approx(mag).epsilon(1e-13));
  CHECK(r.overlap_mean == doctest::Approx(overlap).epsilon(1e-13));
  REQUIRE(r.site_means.size() == 2);
  CHECK(r.site_means[0] == doctest::Approx(s0_mean).epsilon(1e-13));
  CHECK(r.site_means[1] == doctest::Approx(s1_mean).epsilon(1e-13));
  REQUIRE(r.distribution.size() == 4);
  for (std::uint32_t mask = 0; mask < 4; ++mask)
    CHECK(r.distribution[mask] == doctest::Approx(weights[mask] / z).epsilon(1e-13));
}

TEST_CASE("infinite temperature, zero field: uniform measure") {
  const IsingModel m = random_model(6, 17, 0.0);
  const ExactResult r = exact_enumerate(m, 0.0);
  CHECK(r.partition_log == doctest::Approx(6.0 * std::log(2.0)).epsilon(1e-13));
  CHECK(r.magnetization == doctest::Approx(0.0).epsilon(1e-13));
  for (double sm : r.site_means) CHECK(sm == doctest::Approx(0.0).epsilon(1e-13));
  for (double p : r.distribution) CHECK(p == doctest::Approx(1.0 / 64.0).epsilon(1e-12));

  IsingModel big;
  big.j = SymMatrix(21);
  big.h.assign(21, 0.0);
  CHECK_THROWS_AS(exact_enumerate(big, 1.0), std::invalid_argument);
}

TEST_CASE("heat-bath rows, dense kernel, and distribution evolution agree") {
  const std::size_t n = 5;
  const IsingModel m = random_model(n, 23, 0.15);
  const double beta = 0.9;
  const std::size_t states = 1u << n;

  const HeatBathRows rows = heat_bath_rows(m, beta);
  const std::vector<double> kernel = glauber_kernel(m, beta);
  REQUIRE(kernel.size() == states * states);

  for (std::uint32_t s = 0; s < states; ++s) {
    double row_sum = 0.0;
    for (std::uint32_t t = 0; t < states; ++t) {
      const double p = kernel[s * states + t];
      CHECK(p >= 0.0);
      row_sum += p;
      const std::uint32_t diff = s ^ t;
      if (diff != 0 && (diff & (diff - 1)) != 0) CHECK(p == 0.0);  // > 1 flip
    }
    CHECK(row_sum == doctest::Approx(1.0).epsilon(1e-13));
    for (std::size_t i = 0; i < n; ++i) {
      const double p = rows.flip_prob(s, i);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0 / static_cast<double>(n) + 1e-15);
      CHECK(kernel[s * states + (s ^ (1u << i))] == doctest::Approx(p).epsilon(1e-14));
      // Hand-recompute from the conditional law.
      const Spins sp = state_to_spins(s, n);
      double local = m.h[i];
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) local += beta * m.j.at(i, j) * sp[j];
      const double want = (1.0 - sp[i] * std::tanh(local)) / (2.0 * static_cast<double>(n));
      CHECK(p == doctest::Approx(want).epsilon(1e-13));
    }
  }

  // One evolution step is exactly nu P.
  std::vector<double> nu(states, 0.0);
  Xoshiro256pp gen(5);
  double mass = 0.0;
  for (auto& v : nu) mass += (v = gen.uniform01());
  for (auto& v : nu) v /= mass;
  const std::vector<double> pushed = evolve_distribution(m, beta, nu, 1);
  for (std::uint32_t t = 0; t < states; ++t) {
    double want = 0.0;
    for (std::uint32_t s = 0; s < states; ++s) want += nu[s] * kernel[s * states + t];
    CHECK(pushed[t] == doctest::Approx(want).epsilon(1e-12));
  }

  CHECK(detailed_balance_residual(m, beta) <= 1e-14);

  // Point mass relaxes to the enumerated stationary law.
  const ExactResult ex = exact_enumerate(m, beta);
  std::vector<double> point(states, 0.0);
  point[3] = 1.0;
  const std::vector<double> relaxed = evolve_distribution(m, beta, point, 4000);
  CHECK(tv_distance(relaxed, ex.distribution) < 1e-8);
  CHECK(tv_distance(point, point) == 0.0);
}

TEST_CASE("single-site chain draws the exact conditional law") {
  IsingModel m;
  m.j = SymMatrix(1);
  m.h = {1.3};
  GlauberChain<> chain(m, {-1.0}, Xoshiro256pp(99));
  const int steps = 200'000;
  int plus = 0;
  for (int k = 0; k < steps; ++k) {
    chain.step();
    if (chain.spins()[0] == 1.0) ++plus;
  }
  const double want = 0.5 * (1.0 + std::tanh(1.3));
  CHECK(static_cast<double>(plus) / steps == doctest::Approx(want).epsilon(0.004));
}

TEST_CASE("incremental fields, energy, and magnetization survive a long run") {
  const std::size_t n = 64;
  const IsingModel m = random_model(n, 31, 0.1);
  GlauberChain<> chain(m, random_spins(n, 7), Xoshiro256pp(8));
  chain.run(1'000'000);

  GlauberChain<> fresh(m, chain.spins(), Xoshiro256pp(1));  // refresh() runs in ctor
  for (std::size_t i = 0; i < n; ++i)
    CHECK(chain.local_field(i) == doctest::Approx(fresh.local_field(i)).epsilon(1e-9));
  CHECK(chain.energy() == doctest::Approx(fresh.energy()).epsilon(1e-9));

  const double msum = std::accumulate(chain.spins().begin(), chain.spins().end(), 0.0);
  CHECK(chain.magnetization() == doctest::Approx(msum / static_cast<double>(n)).epsilon(1e-12));
  CHECK(chain.steps_taken() == 1'000'000);
}

namespace {
// Negates the acceptance variate; spin-flip symmetry makes the resulting
// chain the exact mirror of the original when all fields vanish.
struct MirrorRng {
  Xoshiro256pp g;
  explicit MirrorRng(std::uint64_t s) : g(s) {}
  std::uint64_t below(std::uint64_t n) { return g.below(n); }
  double uniform_pm1() { return -g.uniform_pm1(); }
};
}  // namespace

TEST_CASE("global spin-flip symmetry holds exactly at zero field") {
  const std::size_t n = 32;
  const IsingModel m = random_model(n, 41, 0.0);
  const Spins start = random_spins(n, 13);
  Spins neg_start = start;
  for (double& v : neg_start) v = -v;

  GlauberChain<Xoshiro256pp> a(m, start, Xoshiro256pp(55));
  GlauberChain<MirrorRng> b(m, neg_start, MirrorRng(55));
  for (int block = 0; block < 50; ++block) {
    for (int k = 0; k < 1000; ++k) {
      a.step();
      b.step();
    }
    for (std::size_t i = 0; i < n; ++i) REQUIRE(a.spins()[i] == -b.spins()[i]);
    CHECK(a.energy() == doctest::Approx(b.energy()).epsilon(1e-12));
  }
}

TEST_CASE("sequential scan visits sites in order") {
  const std::size_t n = 6;
  IsingModel m;
  m.j = SymMatrix(n);
  m.h.assign(n, 10.0);  // strong field: every visited site turns positive
  Spins start(n, -1.0);
  GlauberChain<> chain(m, start, Xoshiro256pp(3));
  chain.set_sequential_scan(true);
  for (std::size_t t = 1; t <= n; ++t) {
    chain.step();
    for (std::size_t i = 0; i < n; ++i)
      CHECK(chain.spins()[i] == (i < t ? 1.0 : -1.0));
  }
}

TEST_CASE("recorded trajectories have the promised shape") {
  const std::size_t n = 12;
  const IsingModel m = random_model(n, 61, 0.05);
  const Spins ref = random_spins(n, 2);
  const std::uint64_t steps = 123;
  const Trajectory traj = glauber_run(m, random_spins(n, 3), steps, 77, ref, 10);
  REQUIRE(!traj.entries.empty());
  CHECK(traj.entries.front().step == 0);
  CHECK(traj.entries.back().step == steps);
  CHECK(traj.record_every == 10);
  for (std::size_t i = 1; i < traj.entries.size(); ++i) {
    CHECK(traj.entries[i].step > traj.entries[i - 1].step);
    CHECK(traj.entries[i].step - traj.entries[i - 1].step <= 10);
    CHECK(!traj.entries[i].z_field.has_value());
    CHECK(std::abs(traj.entries[i].correlation) <= 1.0);
  }
  // Determinism: the same seed reproduces the trajectory exactly.
  const Trajectory again = glauber_run(m, random_spins(n, 3), steps, 77, ref, 10);
  REQUIRE(again.entries.size() == traj.entries.size());
  for (std::size_t i = 0; i < traj.entries.size(); ++i) {
    CHECK(again.entries[i].correlation == traj.entries[i].correlation);
    CHECK(again.entries[i].energy == traj.entries[i].energy);
  }
}

TEST_CASE("warm starts pass through the sampler untouched at zero budget") {
  const std::size_t n = 20;
  const SymMatrix noise = swlab::instance::sample_goe(n, 5);
  const std::vector<double> h(n, 0.2);
  const Spins warm = random_spins(n, 9);
  CHECK(sk_gibbs_sample(noise, 0.4, h, 0, &warm, 123) == warm);
  CHECK(sk_gibbs_sample(noise, 0.4, h, 500, &warm, 123) !=
        sk_gibbs_sample(noise, 0.4, h, 500, nullptr, 124));
  CHECK(default_inner_steps(1000) ==
        static_cast<std::uint64_t>(std::ceil(20.0 * 1000.0 * std::log(1000.0))));
}

TEST_CASE("long chain reproduces exhaustive expectations (batch means)") {
  const std::size_t n = 8;
  const SymMatrix w = swlab::instance::sample_goe(n, 71);
  IsingModel exact_model;
  exact_model.j = w;
  exact_model.h.assign(n, 0.2);
  const double beta = 0.3;
  const ExactResult ex = exact_enumerate(exact_model, beta);

  IsingModel chain_model = exact_model;
  for (auto& v : chain_model.j.a) v *= beta;  // chain applies couplings as given
  GlauberChain<> chain(chain_model, random_spins(n, 1), Xoshiro256pp(2));

  const int batches = 20;
  const int batch_len = 100'000;
  std::vector<double> bm(batches, 0.0), be(batches, 0.0);
  for (int b = 0; b < batches; ++b) {
    double sm = 0.0, se = 0.0;
    for (int k = 0; k < batch_len; ++k) {
      chain.step();
      sm += chain.magnetization();
      se += chain.energy();
    }
    bm[b] = sm / batch_len;
    be[b] = se / batch_len;
  }
  auto mean_sigma = [&](const std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / batches;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= (batches - 1);
    return std::pair<double, double>(mean, std::sqrt(var / batches));
  };
  const auto [m_hat, m_sig] = mean_sigma(bm);
  const auto [e_hat, e_sig] = mean_sigma(be);
  CHECK(std::abs(m_hat - ex.magnetization) <= 4.0 * m_sig);
  CHECK(std::abs(e_hat - ex.energy_mean) <= 4.0 * e_sig);
}

TEST_CASE("dirichlet diagnostic: zero at stationarity, lemma decay from a point mass") {
  const std::size_t n = 6;
  const std::size_t states = 1u << n;
  const IsingModel m = random_model(n, 83, 0.1);
  const double beta = 0.8;
  const ExactResult ex = exact_enumerate(m, beta);

  CHECK(dirichlet_diagnostic(m, beta, ex.distribution) == doctest::Approx(0.0).epsilon(1e-12));

  // Start at the stationary mode, so the initial divergence is at most
  // n log 2; the time-averaged density must then obey the decay bound.
  const std::size_t mode = static_cast<std::size_t>(
      std::max_element(ex.distribution.begin(), ex.distribution.end()) -
      ex.distribution.begin());
  const std::uint64_t horizon = 16;  // > n, so the average has full support
  std::vector<double> nu(states, 0.0);
  nu[mode] = 1.0;
  std::vector<double> avg(states, 0.0);
  std::vector<double> cur = nu;
  for (std::uint64_t t = 0; t < horizon; ++t) {
    for (std::size_t s = 0; s < states; ++s) avg[s] += cur[s] / static_cast<double>(horizon);
    cur = evolve_distribution(m, beta, cur, 1);
  }
  const double bound =
      static_cast<double>(n) * std::log(2.0) / static_cast<double>(horizon);
  const double value = dirichlet_diagnostic(m, beta, avg);
  CHECK(value >= 0.0);
  CHECK(value <= bound + 1e-9);

  // Input validation: normalization and support.
  std::vector<double> unnorm(states, 2.0 / static_cast<double>(states));
  CHECK_THROWS_AS(dirichlet_diagnostic(m, beta, unnorm), std::invalid_argument);
  CHECK_THROWS_AS(dirichlet_diagnostic(m, beta, nu), std::domain_error);  // zeros on support
}
