#include "swlab/scalar/overlap.hpp"

#include <cmath>
#include <stdexcept>

#include "swlab/scalar/quadrature.hpp"

namespace swlab::scalar {

namespace {

double expect_tanh2(double a, double b, int nodes) {
  return gauss_expect_affine(
      [](double x) {
        const double t = std::tanh(x);
        return t * t;
      },
      a, b, nodes);
}

double expect_sech4(double a, double b, int nodes) {
  return gauss_expect_affine(
      [](double x) {
        const double s = sech(x);
        const double s2 = s * s;
        return s2 * s2;
      },
      a, b, nodes);
}

}  // namespace

namespace detail {

OverlapSolution solve_q_from(double beta, double h, double q0, const ModelParams& p) {
  p.validate();
  if (h < 0.0) throw std::invalid_argument("solve_q: field h must be >= 0");

  OverlapSolution sol;
  if (h == 0.0) {
    // Defining convention: q = 0. The field is then identically zero, so the
    // remaining moments are exact.
    sol.q = 0.0;
    sol.q1 = 0.0;
    sol.at_margin = 1.0 - beta * beta;
    sol.converged = true;
    return sol;
  }

  double q = q0;
  for (int it = 1; it <= p.fp_max_iter; ++it) {
    const double t = expect_tanh2(beta * std::sqrt(q), h, p.quad_nodes);
    sol.iterations = it;
    if (std::abs(t - q) <= p.fp_tol) {
      sol.converged = true;
      break;
    }
    q = 0.5 * q + 0.5 * t;
  }
  sol.q = q;
  const double a = beta * std::sqrt(q);
  sol.q1 = gauss_expect_affine([](double x) { return std::tanh(x); }, a, h, p.quad_nodes);
  sol.at_margin = 1.0 - beta * beta * expect_sech4(a, h, p.quad_nodes);
  return sol;
}

}  // namespace detail

OverlapSolution solve_q(double beta, double h, const ModelParams& p) {
  // Start at the beta = 0 solution tanh^2(h); the recursion's right side is
  // increasing in q, so the damped iteration walks monotonically to the root.
  const double th = std::tanh(h);
  return detail::solve_q_from(beta, h, th * th, p);
}

double q_derivative(double beta, double h, const ModelParams& p) {
  const OverlapSolution sol = solve_q(beta, h, p);
  if (!(sol.at_margin > 0.0))
    throw std::domain_error("q_derivative: stability margin must be positive (margin = " +
                            std::to_string(sol.at_margin) + ")");
  const double a = beta * std::sqrt(sol.q);
  const double num = 2.0 * gauss_expect_affine(
                               [](double x) {
                                 const double s = sech(x);
                                 return std::tanh(x) * s * s;
                               },
                               a, h, p.quad_nodes);
  const double den =
      1.0 - beta * beta *
                gauss_expect_affine(
                    [](double x) {
                      const double s2 = sech(x) * sech(x);
                      const double t = std::tanh(x);
                      return s2 * s2 - 2.0 * s2 * t * t;
                    },
                    a, h, p.quad_nodes);
  return num / den;
}

AtResult at_condition(double beta, double h, const ModelParams& p) {
  const OverlapSolution sol = solve_q(beta, h, p);
  return AtResult{sol.at_margin, sol.at_margin > 0.0};
}

TanhIdentityResult check_tanh_identity(double gamma, int k, const ModelParams& p) {
  p.validate();
  if (!(gamma > 0.0)) throw std::invalid_argument("check_tanh_identity: gamma must be > 0");
  if (k < 1) throw std::invalid_argument("check_tanh_identity: k must be >= 1");
  const double a = std::sqrt(gamma);
  TanhIdentityResult r;
  r.lhs = gauss_expect_affine(
      [k](double x) { return std::pow(std::tanh(x), 2 * k); }, a, gamma, p.quad_nodes);
  r.rhs = gauss_expect_affine(
      [k](double x) { return std::pow(std::tanh(x), 2 * k - 1); }, a, gamma, p.quad_nodes);
  r.gap = std::abs(r.lhs - r.rhs);
  return r;
}

}  // namespace swlab::scalar
