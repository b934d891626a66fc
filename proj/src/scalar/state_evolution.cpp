#include "swlab/scalar/state_evolution.hpp"

#include <cmath>
#include <stdexcept>

#include "swlab/scalar/quadrature.hpp"

namespace swlab::scalar {

namespace {

struct MomentPair {
  double mean;    // E tanh(a g + b)
  double square;  // E tanh^2(a g + b)
};

MomentPair tanh_moments(double a, double b, int nodes) {
  MomentPair mp;
  mp.mean = gauss_expect_affine([](double x) { return std::tanh(x); }, a, b, nodes);
  mp.square = gauss_expect_affine(
      [](double x) {
        const double t = std::tanh(x);
        return t * t;
      },
      a, b, nodes);
  return mp;
}

}  // namespace

SePath se_bayes(double lambda, double sigma0_sq, int t_max, const ModelParams& p) {
  p.validate();
  if (lambda < 0.0) throw std::invalid_argument("se_bayes: lambda must be >= 0");
  if (sigma0_sq < 0.0 || sigma0_sq > 1.0)
    throw std::invalid_argument("se_bayes: sigma0_sq must lie in [0, 1]");
  if (t_max < 0) throw std::invalid_argument("se_bayes: t_max must be >= 0");

  SePath path;
  path.variant = SeVariant::Bayes;
  path.entries.reserve(static_cast<std::size_t>(t_max) + 1);
  double s2 = sigma0_sq;
  path.entries.push_back({0, s2, s2});
  for (int t = 1; t <= t_max; ++t) {
    const MomentPair mp =
        tanh_moments(lambda * std::sqrt(s2), lambda * lambda * s2, p.quad_nodes);
    s2 = mp.square;
    path.entries.push_back({t, mp.mean, mp.square});
  }
  return path;
}

SePath se_mismatched(double beta, double lambda, double m0, double q0, int t_max,
                     const ModelParams& p) {
  p.validate();
  if (beta < 0.0 || lambda < 0.0)
    throw std::invalid_argument("se_mismatched: beta, lambda must be >= 0");
  if (m0 < -1.0 || m0 > 1.0) throw std::invalid_argument("se_mismatched: m0 must lie in [-1, 1]");
  if (q0 < 0.0 || q0 > 1.0) throw std::invalid_argument("se_mismatched: q0 must lie in [0, 1]");
  if (t_max < 0) throw std::invalid_argument("se_mismatched: t_max must be >= 0");

  SePath path;
  path.variant = SeVariant::Mismatched;
  path.entries.reserve(static_cast<std::size_t>(t_max) + 1);
  double m = m0, q = q0;
  path.entries.push_back({0, m, q});
  for (int t = 1; t <= t_max; ++t) {
    const MomentPair mp =
        tanh_moments(beta * std::sqrt(q), beta * lambda * m, p.quad_nodes);
    m = mp.mean;
    q = mp.square;
    path.entries.push_back({t, m, q});
  }
  return path;
}

}  // namespace swlab::scalar
