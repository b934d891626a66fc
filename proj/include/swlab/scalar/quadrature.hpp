#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "swlab/scalar/params.hpp"

namespace swlab::scalar {

// Gauss-Hermite rule prepared for standard-normal expectations:
// E[f(g)] ~= sum_i weights[i] * f(nodes[i]), g ~ N(0,1).
// Nodes are symmetric about an exact middle zero (odd count), weights are
// normalized to sum to one.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Cached per node count; thread-safe. n must be odd and >= 21.
const GaussHermite& gauss_hermite(int n);

// E_{g~N(0,1)}[f(g)]. Throws std::runtime_error naming the offending node if
// the integrand evaluates to a non-finite value.
template <class F>
double gauss_expect(F&& f, int quad_nodes = kDefaultQuadNodes) {
  const GaussHermite& gh = gauss_hermite(quad_nodes);
  double s = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    const double v = f(gh.nodes[i]);
    if (!std::isfinite(v))
      throw std::runtime_error("gauss_expect: integrand non-finite at node g=" +
                               std::to_string(gh.nodes[i]) + " (index " + std::to_string(i) +
                               ")");
    s += gh.weights[i] * v;
  }
  return s;
}

template <class F>
double gauss_expect(F&& f, const ModelParams& p) {
  p.validate();
  return gauss_expect(static_cast<F&&>(f), p.quad_nodes);
}

// E[f(a*g + b)] with an exact constant shortcut at a == 0 (the integrand is
// then constant, and the shortcut keeps boundary cases like q = 0 or beta = 0
// exact instead of quadrature-approximate).
template <class F>
double gauss_expect_affine(F&& f, double a, double b, int quad_nodes = kDefaultQuadNodes) {
  if (a == 0.0) {
    const double v = f(b);
    if (!std::isfinite(v))
      throw std::runtime_error("gauss_expect: integrand non-finite at constant argument " +
                               std::to_string(b));
    return v;
  }
  return gauss_expect([&](double g) { return f(a * g + b); }, quad_nodes);
}

// Numerically stable sech(x) = 1/cosh(x); never overflows.
inline double sech(double x) {
  const double t = std::exp(-std::abs(x));
  return 2.0 * t / (1.0 + t * t);
}

}  // namespace swlab::scalar
