#pragma once

#include <cstdint>
#include <vector>

#include "swlab/instance/instance.hpp"
#include "swlab/scalar/params.hpp"

namespace swlab::amp {

// Iterates x^{t+1} = coef * M m^t - b_t m^{t-1} with m^t = tanh(x^t) and
// Onsager coefficient b_t = (coef^2/n) sum_i (1 - tanh^2(x^t_i)).
// coef = lambda is the Bayes-optimal iteration; coef = beta matches the
// mismatched scalar recursion when M carries the (lambda/n) spike.
struct AmpState {
  std::vector<double> m_prev;  // m^{t-1}
  std::vector<double> x_cur;   // x^t
  std::uint64_t t = 0;
};

enum class InitMode { Zero, Spectral };

struct PowerIterationResult {
  std::vector<double> vector;  // unit vector; the top eigenvector when converged
  double value = 0.0;          // Rayleigh quotient (shift removed)
  std::size_t iterations = 0;
  bool converged = false;
};

// Shifted power iteration for the top eigenpair of a symmetric matrix whose
// spectrum lies above -shift; convergence is measured by the sign-aligned
// iterate change in the max norm. When the top of the spectrum is
// (near-)degenerate — no planted signal sticking out of the bulk — the
// iterate genuinely cannot settle on one eigenvector; the budget-exhausted
// result is then returned with converged = false rather than thrown, since a
// unit vector from the top subspace is exactly what the measurement needs in
// that regime.
PowerIterationResult power_iteration_top(const instance::SymMatrix& m, std::uint64_t seed,
                                         double shift = 2.5, double tol = 1e-8,
                                         std::size_t max_iter = 10000);

struct SpectralInitReport {
  AmpState state;
  double rho = 0.0;        // <v1, spike>/sqrt(n), signed
  double sigma0_sq = 0.0;  // effective-noise scale seeding the scalar recursion
  double eigenvalue = 0.0;
  std::size_t power_iterations = 0;
};

// Zero mode: m^{-1} = x^0 = 0. Spectral mode: x^0 = c*v1 with c chosen so the
// empirical second moment (1/n)||x^0||^2 equals lambda^2 * sigma0_sq and the
// sign of c aligns v1 with the spike.
AmpState amp_init(const instance::SpikedInstance& inst, InitMode mode, std::uint64_t seed);

// Spectral initialization with full diagnostics. sigma0_sq < 0 derives the
// scale from the measured eigenvector correlation rho via the consistency
// requirement that x^0 look like lambda^2 sigma0^2 * (x/lambda) + noise of
// variance lambda^2 sigma0^2:  sigma0^2 = rho^2 / (lambda^2 (1 - rho^2)^2);
// if rho^2 < 0.02 the correlation is treated as unmeasured and the
// documented fallback sigma0^2 = 0.01 applies.
SpectralInitReport amp_init_spectral(const instance::SpikedInstance& inst, std::uint64_t seed,
                                     double sigma0_sq = -1.0);

// One iteration; throws runtime_error naming the iterate if a non-finite
// value appears. onsager = false ablates the memory term (b_t = 0).
AmpState amp_step(const AmpState& state, const instance::SpikedInstance& inst, double coef,
                  bool onsager = true);

// (1/n) <tanh(x_cur), spike>: the correlation the state-evolution recursion
// tracks.
double state_correlation(const AmpState& state, const instance::SpikedInstance& inst);

// Deterministic one-step comparator for the two-stage dynamics: returns
// f_update(R(sigma, spike)) after checking the stability condition at
// (beta, beta*lambda*|R|); a violated condition is a domain error.
double amp_like_map(const instance::Spins& sigma, const instance::SpikedInstance& inst,
                    double beta, double lambda, const scalar::ModelParams& p = {});

}  // namespace swlab::amp
