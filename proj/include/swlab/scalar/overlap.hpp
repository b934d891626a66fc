#pragma once

#include "swlab/scalar/params.hpp"

namespace swlab::scalar {

// Solution of the scalar overlap recursion q = E tanh^2(beta*g*sqrt(q) + h).
// By convention q(beta, 0) = 0. q1 = E tanh(beta*g*sqrt(q) + h) is the
// matching mean magnetization; at_margin = 1 - beta^2 E sech^4(...) measures
// the replica-symmetry stability condition (satisfied iff margin > 0).
struct OverlapSolution {
  double q = 0.0;
  double q1 = 0.0;
  double at_margin = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Damped fixed-point iteration (damping 0.5) on the overlap recursion.
// h < 0 is an input error; h == 0 returns the defining q = 0 exactly.
OverlapSolution solve_q(double beta, double h, const ModelParams& p = {});

// Implicit-function derivative dq/dh at the solved overlap:
//   q'(h) = 2 E[T S^2] / (1 - beta^2 E[S^4 - 2 S^2 T^2]),
// T = tanh(X), S = sech(X), X = beta*g*sqrt(q) + h. Requires a strictly
// positive stability margin (domain error otherwise).
double q_derivative(double beta, double h, const ModelParams& p = {});

struct AtResult {
  double margin = 0.0;
  bool satisfied = false;  // margin > 0
};

AtResult at_condition(double beta, double h, const ModelParams& p = {});

// Moment identity of the shifted Gaussian field: for gamma > 0 and k >= 1,
//   E tanh^{2k}(gamma + g*sqrt(gamma)) = E tanh^{2k-1}(gamma + g*sqrt(gamma)).
struct TanhIdentityResult {
  double lhs = 0.0;  // even moment  E tanh^{2k}
  double rhs = 0.0;  // odd moment   E tanh^{2k-1}
  double gap = 0.0;  // |lhs - rhs|
};

TanhIdentityResult check_tanh_identity(double gamma, int k, const ModelParams& p = {});

namespace detail {
// solve_q with a caller-provided starting point (warm starts for scans).
OverlapSolution solve_q_from(double beta, double h, double q0, const ModelParams& p);
}  // namespace detail

}  // namespace swlab::scalar
