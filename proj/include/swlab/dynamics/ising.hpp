#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "swlab/instance/instance.hpp"
#include "swlab/rng.hpp"
#include "swlab/simd/kernels.hpp"

namespace swlab::dynamics {

// Gibbs measure mu(s) ~ exp( (1/2) s^T J s + <h, s> ). Any inverse
// temperature lives inside J (and, where appropriate, h); the chain applies
// the couplings exactly as given.
struct IsingModel {
  instance::SymMatrix j;
  std::vector<double> h;

  std::size_t size() const { return j.n; }
  void validate() const {
    if (j.n == 0 || j.a.size() != j.n * j.n)
      throw std::invalid_argument("IsingModel: coupling matrix must be square and non-empty");
    if (h.size() != j.n)
      throw std::invalid_argument("IsingModel: field dimension must match coupling");
  }
};

struct TrajectoryEntry {
  std::uint64_t step = 0;
  double correlation = 0.0;
  double energy = 0.0;
  std::optional<double> z_field;  // set for z-driven chains, absent for plain Glauber
};

struct Trajectory {
  std::vector<TrajectoryEntry> entries;
  std::uint64_t record_every = 0;
  std::uint64_t seed = 0;
};

// Heat-bath single-site dynamics. One step picks a site (uniformly at random
// by default; sequential scan behind a flag) and resamples it from its
// conditional: Pr[+1] = (1 + tanh(local)) / 2 with
// local_i = (J s)_i - J_ii s_i + h_i. Local fields are maintained
// incrementally (O(n) per accepted flip via the axpy kernel), as is the
// energy H = (1/2) s^T J s + <h, s> (compensated summation).
//
// The Rng type needs below(n), uniform_pm1() and gaussian(); it is a template
// parameter so tests can couple chains through transformed streams.
template <class Rng = rng::Xoshiro256pp>
class GlauberChain {
 public:
  GlauberChain(const IsingModel& model, instance::Spins start, Rng gen)
      : model_(&model), s_(std::move(start)), gen_(std::move(gen)) {
    model.validate();
    if (s_.size() != model.size())
      throw std::invalid_argument("GlauberChain: start configuration size mismatch");
    for (double v : s_)
      if (v != 1.0 && v != -1.0)
        throw std::invalid_argument("GlauberChain: start entries must be +/-1");
    refresh();
  }

  // One site update. Returns true if the spin changed sign.
  bool step() {
    const std::size_t n = s_.size();
    const std::size_t i = sequential_ ? (scan_pos_++ % n) : gen_.below(n);
    const double local = f_[i] - model_->j.at(i, i) * s_[i] + model_->h[i];
    const double v = gen_.uniform_pm1();
    const double ns = (v < std::tanh(local)) ? 1.0 : -1.0;
    ++t_;
    if (ns == s_[i]) return false;
    const double delta = ns - s_[i];  // +/-2
    kahan_add(delta * local);
    simd::axpy(delta, model_->j.row(i), f_.data(), n);
    s_[i] = ns;
    spin_sum_ += delta;
    return true;
  }

  void run(std::uint64_t steps) {
    for (std::uint64_t k = 0; k < steps; ++k) step();
  }

  const instance::Spins& spins() const { return s_; }
  double energy() const { return energy_; }
  double magnetization() const { return spin_sum_ / static_cast<double>(s_.size()); }
  std::uint64_t steps_taken() const { return t_; }
  double local_field(std::size_t i) const {
    return f_[i] - model_->j.at(i, i) * s_[i] + model_->h[i];
  }

  // Recompute fields and energy from scratch (O(n^2)); the incremental
  // bookkeeping is equivalence-tested against this.
  void refresh() {
    const std::size_t n = s_.size();
    f_.assign(n, 0.0);
    simd::symv(model_->j.data(), n, s_.data(), f_.data());
    energy_ = 0.5 * simd::dot(s_.data(), f_.data(), n) +
              simd::dot(model_->h.data(), s_.data(), n);
    energy_comp_ = 0.0;
    spin_sum_ = simd::sum(s_.data(), n);
  }

  void set_sequential_scan(bool on) {
    sequential_ = on;
    scan_pos_ = 0;
  }

 private:
  void kahan_add(double x) {
    const double y = x - energy_comp_;
    const double t = energy_ + y;
    energy_comp_ = (t - energy_) - y;
    energy_ = t;
  }

  const IsingModel* model_;
  instance::Spins s_;
  std::vector<double> f_;  // J s, diagonal included
  double energy_ = 0.0;
  double energy_comp_ = 0.0;
  double spin_sum_ = 0.0;
  std::uint64_t t_ = 0;
  Rng gen_;
  bool sequential_ = false;
  std::size_t scan_pos_ = 0;
};

using Observer = std::function<void(std::uint64_t step, const instance::Spins&)>;

// Runs heat-bath dynamics for `steps` site updates, recording correlation
// against `ref` and energy at step 0, every `record_every` steps (0 means n),
// and at the final step. An optional observer fires at every record point.
Trajectory glauber_run(const IsingModel& model, const instance::Spins& start,
                       std::uint64_t steps, std::uint64_t seed, const instance::Spins& ref,
                       std::uint64_t record_every = 0, bool sequential = false,
                       const Observer& observer = {});

// Approximate Gibbs sample of mu(s) ~ exp((beta/2) s^T W s + <h, s>): scales
// the coupling, warm-starts from `warm` (or a random configuration drawn from
// the seed when warm is null) and runs `inner_steps` heat-bath updates.
instance::Spins sk_gibbs_sample(const instance::SymMatrix& noise, double beta,
                                const std::vector<double>& h, std::uint64_t inner_steps,
                                const instance::Spins* warm, std::uint64_t seed);

// Default inner budget: ceil(20 n ln n).
std::uint64_t default_inner_steps(std::size_t n);

// Uniform random +/-1 configuration.
instance::Spins random_spins(std::size_t n, std::uint64_t seed);

}  // namespace swlab::dynamics
