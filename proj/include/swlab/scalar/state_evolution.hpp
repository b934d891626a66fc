#pragma once

#include <vector>

#include "swlab/scalar/params.hpp"

namespace swlab::scalar {

enum class SeVariant { Bayes, Mismatched };

// One tracked point of a state-evolution path. For the Bayes variant the
// stored pair is (m, q) = (mu_t / lambda, sigma_t^2); the matched recursion
// keeps m == q (up to quadrature) from t = 1 on. For the mismatched variant
// (m, q) = (M_t, Q_t) of the synchronous two-dimensional recursion.
struct SeEntry {
  int t = 0;
  double m = 0.0;
  double q = 0.0;
};

struct SePath {
  std::vector<SeEntry> entries;
  SeVariant variant = SeVariant::Bayes;
};

// Matched (Bayes-optimal) recursion, parameterized by sigma^2:
//   sigma_{t+1}^2 = E tanh^2(lambda*g*sigma_t + lambda^2*sigma_t^2),
//   mu_{t+1}      = lambda * E tanh(same argument),
// seeded at sigma_0^2 = sigma0_sq (mu_0 = lambda*sigma0_sq, so entry 0 is
// (sigma0_sq, sigma0_sq)). sigma0_sq = 0 reproduces the degenerate all-zero
// path exactly. At a fixed point mu = lambda*sigma^2, i.e. m == q.
SePath se_bayes(double lambda, double sigma0_sq, int t_max, const ModelParams& p = {});

// Synchronous mismatched recursion at inverse temperature beta:
//   M_{t+1} = E tanh(beta*g*sqrt(Q_t) + beta*lambda*M_t),
//   Q_{t+1} = E tanh^2(same argument).
SePath se_mismatched(double beta, double lambda, double m0, double q0, int t_max,
                     const ModelParams& p = {});

}  // namespace swlab::scalar
