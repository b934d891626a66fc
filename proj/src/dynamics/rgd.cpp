#include "swlab/dynamics/rgd.hpp"

#include <cmath>
#include <stdexcept>

#include "swlab/scalar/overlap.hpp"
#include "swlab/simd/kernels.hpp"

namespace swlab::dynamics {

namespace {

IsingModel scaled_sk_model(const instance::SymMatrix& noise, double beta) {
  IsingModel model;
  model.j.n = noise.n;
  model.j.a.resize(noise.a.size());
  for (std::size_t k = 0; k < noise.a.size(); ++k) model.j.a[k] = beta * noise.a[k];
  model.h.assign(noise.n, 0.0);
  return model;
}

void check_spins(const instance::Spins& sigma, std::size_t n, const char* what) {
  if (sigma.size() != n) throw std::invalid_argument(std::string(what) + ": size mismatch");
  for (double v : sigma)
    if (v != 1.0 && v != -1.0)
      throw std::invalid_argument(std::string(what) + ": entries must be +/-1");
}

}  // namespace

RgdStepResult rgd_step(const instance::Spins& sigma, const instance::SpikedInstance& inst,
                       double beta, std::uint64_t inner_steps, std::uint64_t seed) {
  check_spins(sigma, inst.n, "rgd_step");
  if (beta < 0.0) throw std::invalid_argument("rgd_step: beta must be >= 0");
  if (inner_steps == 0) inner_steps = default_inner_steps(inst.n);

  const double bl = beta * inst.lambda;
  rng::Xoshiro256pp outer(rng::mix_seed(seed, rng::kTagOuter));

  RgdStepResult out;
  out.r_before = instance::correlation(sigma, inst.spike);
  out.g = outer.gaussian();
  out.z = bl * out.r_before + std::sqrt(bl / static_cast<double>(inst.n)) * out.g;

  IsingModel model = scaled_sk_model(inst.noise, beta);
  for (std::size_t i = 0; i < inst.n; ++i) model.h[i] = out.z * inst.spike[i];
  GlauberChain<rng::Xoshiro256pp> chain(model, sigma,
                                        rng::Xoshiro256pp(rng::mix_seed(seed, rng::kTagChain)));
  chain.run(inner_steps);
  out.sigma = chain.spins();
  return out;
}

Trajectory rgd_run(const instance::Spins& start, const instance::SpikedInstance& inst,
                   double beta, std::uint64_t t_steps, std::uint64_t inner_steps,
                   std::uint64_t seed) {
  check_spins(start, inst.n, "rgd_run");
  if (beta < 0.0) throw std::invalid_argument("rgd_run: beta must be >= 0");
  if (inner_steps == 0) inner_steps = default_inner_steps(inst.n);

  const double bl = beta * inst.lambda;
  const double sd = std::sqrt(bl / static_cast<double>(inst.n));
  rng::Xoshiro256pp outer(rng::mix_seed(seed, rng::kTagOuter));

  IsingModel model = scaled_sk_model(inst.noise, beta);
  GlauberChain<rng::Xoshiro256pp> chain(model, start,
                                        rng::Xoshiro256pp(rng::mix_seed(seed, rng::kTagChain)));

  Trajectory traj;
  traj.record_every = 1;
  traj.seed = seed;
  auto record = [&](std::uint64_t step, double z, bool have_z) {
    TrajectoryEntry e;
    e.step = step;
    e.correlation = instance::correlation(chain.spins(), inst.spike);
    e.energy = instance::posterior_energy(chain.spins(), inst, beta);
    if (have_z) e.z_field = z;
    traj.entries.push_back(e);
  };
  record(0, 0.0, false);

  for (std::uint64_t t = 1; t <= t_steps; ++t) {
    const double r = instance::correlation(chain.spins(), inst.spike);
    const double z = bl * r + sd * outer.gaussian();
    // The chain reads the model's field live; updating it re-targets the
    // conditional mu_{beta W, z spike} without touching the cached J*sigma.
    for (std::size_t i = 0; i < inst.n; ++i) model.h[i] = z * inst.spike[i];
    chain.run(inner_steps);
    record(t, z, true);
  }
  return traj;
}

double prgd_step(double z, const instance::SymMatrix& noise, double beta, double lambda,
                 std::uint64_t inner_steps, std::uint64_t seed) {
  if (std::abs(z) > 1.0) throw std::invalid_argument("prgd_step: |z| must be <= 1");
  if (beta < 0.0 || lambda < 0.0)
    throw std::invalid_argument("prgd_step: beta and lambda must be >= 0");
  const std::size_t n = noise.n;
  if (n == 0) throw std::invalid_argument("prgd_step: empty noise matrix");
  if (inner_steps == 0) inner_steps = default_inner_steps(n);

  const double bl = beta * lambda;
  rng::Xoshiro256pp outer(rng::mix_seed(seed, rng::kTagOuter));
  const double field = bl * z + std::sqrt(bl / static_cast<double>(n)) * outer.gaussian();

  const std::vector<double> h(n, field);
  const instance::Spins sigma =
      sk_gibbs_sample(noise, beta, h, inner_steps, nullptr, rng::mix_seed(seed, rng::kTagChain));
  return simd::sum(sigma.data(), n) / static_cast<double>(n);
}

Trajectory curie_weiss_rgd(double beta, double h, std::size_t n, std::uint64_t t_steps,
                           std::uint64_t seed) {
  if (beta < 0.0) throw std::invalid_argument("curie_weiss_rgd: beta must be >= 0");
  if (n == 0) throw std::invalid_argument("curie_weiss_rgd: n must be >= 1");

  rng::Xoshiro256pp outer(rng::mix_seed(seed, rng::kTagOuter));
  rng::Xoshiro256pp inner(rng::mix_seed(seed, rng::kTagChain));
  instance::Spins sigma = random_spins(n, rng::mix_seed(seed, rng::kTagStart));

  Trajectory traj;
  traj.record_every = 1;
  traj.seed = seed;
  auto magnetization = [&]() { return simd::sum(sigma.data(), n) / static_cast<double>(n); };
  auto record = [&](std::uint64_t step, double z, bool have_z) {
    const double m = magnetization();
    TrajectoryEntry e;
    e.step = step;
    e.correlation = m;
    e.energy = static_cast<double>(n) * (0.5 * beta * m * m + h * m);
    if (have_z) e.z_field = z;
    traj.entries.push_back(e);
  };
  record(0, 0.0, false);

  const double sd = std::sqrt(beta / static_cast<double>(n));
  for (std::uint64_t t = 1; t <= t_steps; ++t) {
    const double z = beta * magnetization() + sd * outer.gaussian();
    const double p_plus = 0.5 * (1.0 + std::tanh(z + h));
    for (std::size_t i = 0; i < n; ++i)
      sigma[i] = (inner.uniform01() <= p_plus) ? 1.0 : -1.0;
    record(t, z, true);
  }
  return traj;
}

double curie_weiss_root(double beta, double h) {
  if (beta < 0.0 || h < 0.0)
    throw std::invalid_argument("curie_weiss_root: beta and h must be >= 0");
  double m = 1.0;
  for (int it = 0; it < 200000; ++it) {
    const double next = std::tanh(beta * m + h);
    if (std::abs(next - m) <= 1e-14) return next;
    m = next;
  }
  return m;
}

OverlapProbeResult overlap_concentration_probe(const instance::SymMatrix& noise, double beta,
                                               double h, std::size_t trials,
                                               std::uint64_t inner_steps, std::uint64_t seed) {
  if (trials < 2) throw std::invalid_argument("overlap_concentration_probe: trials must be >= 2");
  const std::size_t n = noise.n;
  if (n == 0) throw std::invalid_argument("overlap_concentration_probe: empty noise matrix");
  if (inner_steps == 0) inner_steps = default_inner_steps(n);

  const std::vector<double> field(n, h);
  OverlapProbeResult out;
  out.overlaps.reserve(trials);
  for (std::size_t k = 0; k < trials; ++k) {
    const instance::Spins a = sk_gibbs_sample(
        noise, beta, field, inner_steps, nullptr,
        rng::mix_seed(seed, rng::kTagTrialBase + 2 * static_cast<std::uint64_t>(k)));
    const instance::Spins b = sk_gibbs_sample(
        noise, beta, field, inner_steps, nullptr,
        rng::mix_seed(seed, rng::kTagTrialBase + 2 * static_cast<std::uint64_t>(k) + 1));
    out.overlaps.push_back(simd::dot(a.data(), b.data(), n) / static_cast<double>(n));
  }
  for (double v : out.overlaps) out.mean_overlap += v;
  out.mean_overlap /= static_cast<double>(trials);
  for (double v : out.overlaps)
    out.var_overlap += (v - out.mean_overlap) * (v - out.mean_overlap);
  out.var_overlap /= static_cast<double>(trials - 1);
  out.q_predicted = scalar::solve_q(beta, h).q;
  return out;
}

}  // namespace swlab::dynamics
