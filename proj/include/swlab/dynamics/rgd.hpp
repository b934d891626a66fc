#pragma once

#include <cstdint>
#include <vector>

#include "swlab/dynamics/ising.hpp"
#include "swlab/instance/instance.hpp"

namespace swlab::dynamics {

// One outer step of the two-stage dynamics targeting mu_{beta M}:
//   g ~ N(0,1);  z = beta*lambda*R(sigma, spike) + sqrt(beta*lambda/n)*g;
//   sigma' ~ mu_{beta W, z*spike}   (approximated by a warm-started
//                                    heat-bath run of inner_steps updates).
struct RgdStepResult {
  instance::Spins sigma;
  double z = 0.0;
  double g = 0.0;
  double r_before = 0.0;
};

RgdStepResult rgd_step(const instance::Spins& sigma, const instance::SpikedInstance& inst,
                       double beta, std::uint64_t inner_steps, std::uint64_t seed);

// Iterates the outer step T times from `start`, keeping the inner chain warm
// across outer steps (the conditional resampling is always warm-started at
// the current configuration, so a persistent chain is equivalent and avoids
// re-deriving fields). Records R(sigma_t, spike), the posterior energy
// (beta/2) sigma^T M sigma, and z_t at every outer step; inner_steps = 0
// selects the default budget of ceil(20 n ln n) updates per outer step.
Trajectory rgd_run(const instance::Spins& start, const instance::SpikedInstance& inst,
                   double beta, std::uint64_t t_steps, std::uint64_t inner_steps,
                   std::uint64_t seed);

// One step of the 1-D projected chain: from correlation z, draws g, forms
// field = beta*lambda*z + sqrt(beta*lambda/n)*g, samples sigma from
// mu_{beta W, field*1} (cold random start), and returns R(sigma, 1).
double prgd_step(double z, const instance::SymMatrix& noise, double beta, double lambda,
                 std::uint64_t inner_steps, std::uint64_t seed);

// Mean-field specialization (noise = 0, spike = 1, lambda = 1, external field
// h): the conditional is an exact product measure, so each outer step draws
// z = beta*m + sqrt(beta/n)*g and resamples every spin independently with
// Pr[+1] = (1 + tanh(z + h))/2. The magnetization trajectory converges to the
// stable solution of m = tanh(beta*m + h). Energy per entry is
// n*(beta*m^2/2 + h*m); z_field records z.
Trajectory curie_weiss_rgd(double beta, double h, std::size_t n, std::uint64_t t_steps,
                           std::uint64_t seed);

// Largest solution of m = tanh(beta*m + h) for h >= 0 (the stable root),
// by monotone fixed-point iteration from m = 1.
double curie_weiss_root(double beta, double h);

// Draws `trials` independent replica pairs from mu_{beta W, h*1} and reports
// the empirical law of the overlap <s1, s2>/n against the predicted q.
struct OverlapProbeResult {
  double mean_overlap = 0.0;
  double var_overlap = 0.0;
  double q_predicted = 0.0;
  std::vector<double> overlaps;
};

OverlapProbeResult overlap_concentration_probe(const instance::SymMatrix& noise, double beta,
                                               double h, std::size_t trials,
                                               std::uint64_t inner_steps, std::uint64_t seed);

}  // namespace swlab::dynamics
