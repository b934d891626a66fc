#pragma once

#include <string_view>
#include <vector>

#include "swlab/scalar/params.hpp"

namespace swlab::scalar {

// One-dimensional update map of the planted overlap:
//   f(z) = E tanh(beta*g*sqrt(q) + beta*lambda*z),  q = q(beta, beta*lambda*|z|).
// Odd in z (computed via |z| so the symmetry is exact); f(0) = 0; slope
// beta*lambda at the origin for beta < 1.
double f_update(double z, double beta, double lambda, const ModelParams& p = {});

enum class Regime {
  SubCritical,            // beta*lambda < 1: only the stable zero fixed point
  SuperCriticalHighTemp,  // beta <= 1 <= beta*lambda: zero unstable, +/-opt stable
  LowTempWithFP,          // beta > 1, a stability-satisfying positive fixed point exists
  LowTempNoFP,            // beta > 1, no stability-satisfying positive fixed point
};

std::string_view regime_name(Regime r);

struct FixedPointInfo {
  double z = 0.0;
  double derivative = 0.0;  // central difference, step 1e-5
  bool stable = false;      // |derivative| < 1
  bool at_satisfied = false;
  double at_margin = 0.0;
};

struct FixedPointReport {
  std::vector<FixedPointInfo> fixed_points;  // ascending in z, z >= 0
  double opt = 0.0;  // largest stability-satisfying fixed point; 0 if only the origin qualifies
  Regime regime = Regime::SubCritical;
};

// Scans f(z) - z on a 2001-point grid over [0, 1], refines each sign change
// by bisection to fp_tol, and classifies the temperature regime. The zero
// fixed point is always reported.
FixedPointReport find_opt(double beta, double lambda, const ModelParams& p = {});

}  // namespace swlab::scalar
