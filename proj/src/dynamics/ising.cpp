#include "swlab/dynamics/ising.hpp"

#include <cmath>

namespace swlab::dynamics {

std::uint64_t default_inner_steps(std::size_t n) {
  if (n < 2) return 1;
  return static_cast<std::uint64_t>(
      std::ceil(20.0 * static_cast<double>(n) * std::log(static_cast<double>(n))));
}

instance::Spins random_spins(std::size_t n, std::uint64_t seed) {
  rng::Xoshiro256pp gen(seed);
  instance::Spins s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (gen.next() >> 63) ? 1.0 : -1.0;
  return s;
}

Trajectory glauber_run(const IsingModel& model, const instance::Spins& start,
                       std::uint64_t steps, std::uint64_t seed, const instance::Spins& ref,
                       std::uint64_t record_every, bool sequential, const Observer& observer) {
  model.validate();
  if (ref.size() != model.size())
    throw std::invalid_argument("glauber_run: reference configuration size mismatch");
  const std::uint64_t every = record_every == 0 ? model.size() : record_every;

  GlauberChain<rng::Xoshiro256pp> chain(model, start, rng::Xoshiro256pp(seed));
  chain.set_sequential_scan(sequential);

  Trajectory traj;
  traj.record_every = every;
  traj.seed = seed;
  auto record = [&](std::uint64_t step) {
    TrajectoryEntry e;
    e.step = step;
    e.correlation = instance::correlation(chain.spins(), ref);
    e.energy = chain.energy();
    traj.entries.push_back(e);
    if (observer) observer(step, chain.spins());
  };

  record(0);
  for (std::uint64_t t = 1; t <= steps; ++t) {
    chain.step();
    if (t % every == 0 || t == steps) record(t);
  }
  return traj;
}

instance::Spins sk_gibbs_sample(const instance::SymMatrix& noise, double beta,
                                const std::vector<double>& h, std::uint64_t inner_steps,
                                const instance::Spins* warm, std::uint64_t seed) {
  if (beta < 0.0) throw std::invalid_argument("sk_gibbs_sample: beta must be >= 0");
  const std::size_t n = noise.n;
  if (h.size() != n) throw std::invalid_argument("sk_gibbs_sample: field size mismatch");

  IsingModel model;
  model.j.n = n;
  model.j.a.resize(n * n);
  for (std::size_t k = 0; k < n * n; ++k) model.j.a[k] = beta * noise.a[k];
  model.h = h;

  instance::Spins start =
      warm ? *warm : random_spins(n, rng::mix_seed(seed, rng::kTagStart));
  GlauberChain<rng::Xoshiro256pp> chain(model, std::move(start), rng::Xoshiro256pp(seed));
  chain.run(inner_steps);
  return chain.spins();
}

}  // namespace swlab::dynamics
