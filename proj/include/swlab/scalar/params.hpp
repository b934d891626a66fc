#pragma once

#include <stdexcept>
#include <string>

namespace swlab::scalar {

inline constexpr int kDefaultQuadNodes = 201;

// Shared numeric knobs for the scalar fixed-point layer. beta/lambda ride
// along so a single struct can describe a model point in configs; the solvers
// below always take beta/h/lambda explicitly.
struct ModelParams {
  double beta = 1.0;
  double lambda = 1.0;
  int quad_nodes = kDefaultQuadNodes;  // >= 21 and odd
  double fp_tol = 1e-12;
  int fp_max_iter = 10000;

  void validate() const {
    if (!(beta >= 0.0)) throw std::invalid_argument("ModelParams: beta must be >= 0");
    if (!(lambda >= 0.0)) throw std::invalid_argument("ModelParams: lambda must be >= 0");
    if (quad_nodes < 21 || quad_nodes % 2 == 0)
      throw std::invalid_argument("ModelParams: quad_nodes must be odd and >= 21, got " +
                                  std::to_string(quad_nodes));
    if (!(fp_tol > 0.0)) throw std::invalid_argument("ModelParams: fp_tol must be > 0");
    if (fp_max_iter < 1) throw std::invalid_argument("ModelParams: fp_max_iter must be >= 1");
  }
};

}  // namespace swlab::scalar
