#pragma once

#include <cstdint>
#include <vector>

#include "swlab/dynamics/ising.hpp"
#include "swlab/instance/instance.hpp"
#include "swlab/scalar/params.hpp"

namespace swlab::dynamics {

// Exhaustive Gibbs expectations for pi(s) ~ exp((beta/2) s^T J s + <h, s>).
// beta scales the coupling only; fields are applied as given. States are
// indexed by bitmask: bit i set means s_i = +1.
struct ExactResult {
  double magnetization = 0.0;  // E[(1/n) sum_i s_i]
  double overlap_mean = 0.0;   // E[<s1,s2>/n] over independent replicas = (1/n) sum_i <s_i>^2
  double partition_log = 0.0;  // log sum_s exp(H(s))
  double energy_mean = 0.0;    // E[H(s)], H(s) = (beta/2) s^T J s + <h, s>
  std::vector<double> site_means;    // <s_i>
  std::vector<double> distribution;  // pi over all 2^n states
};

// Gray-code sweep over all 2^n states; refuses n > 20 (cost guard).
ExactResult exact_enumerate(const IsingModel& model, double beta);

// One-step transition probabilities of the random-scan heat-bath chain out of
// every state: flip[s*n + i] is the probability of moving from s to s with
// bit i flipped; the remainder is the self-loop. Couplings scaled by beta.
struct HeatBathRows {
  std::size_t n = 0;
  std::vector<double> flip;  // size 2^n * n
  double flip_prob(std::uint32_t state, std::size_t site) const {
    return flip[static_cast<std::size_t>(state) * n + site];
  }
};
HeatBathRows heat_bath_rows(const IsingModel& model, double beta);

// Dense 2^n x 2^n one-step kernel, row-major. Guarded at n <= 10 (memory).
std::vector<double> glauber_kernel(const IsingModel& model, double beta);

// max over adjacent state pairs of |pi(x)P(x,y) - pi(y)P(y,x)|.
double detailed_balance_residual(const IsingModel& model, double beta);

// Evolves a distribution `steps` one-site updates under the exact heat-bath
// kernel.
std::vector<double> evolve_distribution(const IsingModel& model, double beta,
                                        std::vector<double> nu, std::uint64_t steps);

// Exact transition kernel of the two-stage dynamics on a spiked instance:
// z = beta*lambda*R(s, spike) + sqrt(beta*lambda/n)*g with g standard normal
// (integrated by Gauss-Hermite quadrature), followed by an exact sample of
// mu_{beta W, z spike}. The outgoing row depends on s only through
// c = <s, spike>, so only n+1 distinct rows exist.
struct TwoStageExactKernel {
  std::size_t n = 0;
  std::vector<double> stationary;         // mu_{beta M} over 2^n states
  std::vector<std::vector<double>> rows;  // rows[k] is the row for c = 2k - n
  std::vector<std::uint8_t> class_of_state;
  const std::vector<double>& row_for(std::uint32_t s) const {
    return rows[class_of_state[s]];
  }
};
TwoStageExactKernel rgd_exact_kernel(const instance::SpikedInstance& inst, double beta,
                                     int quad_nodes = scalar::kDefaultQuadNodes);

// Total-variation distance (1/2) sum |p - q|.
double tv_distance(const std::vector<double>& p, const std::vector<double>& q);

// TV(pi P, pi) for the two-stage kernel; zero up to quadrature error.
double stationarity_residual(const TwoStageExactKernel& kernel);

// Dirichlet form E(f, log f) with f = d(nu)/d(pi), evaluated exactly:
//   E = sum_{x,y} pi(x) P(x,y) (f(x) - f(y)) (log f(x) - log f(y)).
// Errors: nu not normalized within 1e-12 -> invalid_argument; nu zero on a
// pi-positive state -> domain_error (log f undefined).
double dirichlet_diagnostic(const IsingModel& model, double beta,
                            const std::vector<double>& nu);
double dirichlet_diagnostic(const instance::SpikedInstance& inst, double beta,
                            const std::vector<double>& nu,
                            int quad_nodes = scalar::kDefaultQuadNodes);

}  // namespace swlab::dynamics
