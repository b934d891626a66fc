#include "swlab/amp/amp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "swlab/rng.hpp"
#include "swlab/scalar/fixed_point.hpp"
#include "swlab/scalar/overlap.hpp"
#include "swlab/simd/kernels.hpp"

namespace swlab::amp {

namespace {

void check_finite(const std::vector<double>& v, std::uint64_t t, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i]))
      throw std::runtime_error(std::string("amp_step: non-finite ") + what + " at iterate t=" +
                               std::to_string(t) + ", index " + std::to_string(i));
}

}  // namespace

PowerIterationResult power_iteration_top(const instance::SymMatrix& m, std::uint64_t seed,
                                         double shift, double tol, std::size_t max_iter) {
  const std::size_t n = m.n;
  if (n == 0) throw std::invalid_argument("power_iteration_top: empty matrix");

  rng::Xoshiro256pp gen(seed);
  std::vector<double> v(n), next(n);
  for (double& x : v) x = gen.gaussian();
  double norm = std::sqrt(simd::sum_sq(v.data(), n));
  for (double& x : v) x /= norm;

  for (std::size_t it = 1; it <= max_iter; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    simd::symv(m.data(), n, v.data(), next.data());
    simd::axpy(shift, v.data(), next.data(), n);
    norm = std::sqrt(simd::sum_sq(next.data(), n));
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw std::runtime_error("power_iteration_top: degenerate iterate");
    const double align = simd::dot(next.data(), v.data(), n) >= 0.0 ? 1.0 : -1.0;
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] *= align / norm;
      change = std::max(change, std::abs(next[i] - v[i]));
    }
    v.swap(next);
    if (change <= tol || it == max_iter) {
      PowerIterationResult out;
      out.vector = std::move(v);
      out.iterations = it;
      out.converged = change <= tol;
      std::fill(next.begin(), next.end(), 0.0);
      simd::symv(m.data(), n, out.vector.data(), next.data());
      out.value = simd::dot(out.vector.data(), next.data(), n);
      return out;
    }
  }
  throw std::logic_error("power_iteration_top: unreachable");
}

SpectralInitReport amp_init_spectral(const instance::SpikedInstance& inst, std::uint64_t seed,
                                     double sigma0_sq) {
  const std::size_t n = inst.n;
  if (inst.lambda <= 0.0)
    throw std::invalid_argument("amp_init_spectral: requires lambda > 0");

  SpectralInitReport report;
  PowerIterationResult top =
      power_iteration_top(inst.m_matrix, rng::mix_seed(seed, rng::kTagPower));
  report.eigenvalue = top.value;
  report.power_iterations = top.iterations;
  report.rho = simd::dot(top.vector.data(), inst.spike.data(), n) /
               std::sqrt(static_cast<double>(n));

  const double rho_sq = report.rho * report.rho;
  if (sigma0_sq >= 0.0) {
    report.sigma0_sq = sigma0_sq;
  } else if (rho_sq < 0.02) {
    report.sigma0_sq = 0.01;  // correlation unmeasurable; documented fallback
  } else {
    const double denom = 1.0 - rho_sq;
    report.sigma0_sq = rho_sq / (inst.lambda * inst.lambda * denom * denom);
  }

  const double sign = report.rho >= 0.0 ? 1.0 : -1.0;
  const double c =
      sign * inst.lambda * std::sqrt(report.sigma0_sq * static_cast<double>(n));
  report.state.m_prev.assign(n, 0.0);
  report.state.x_cur.resize(n);
  for (std::size_t i = 0; i < n; ++i) report.state.x_cur[i] = c * top.vector[i];
  report.state.t = 0;
  return report;
}

AmpState amp_init(const instance::SpikedInstance& inst, InitMode mode, std::uint64_t seed) {
  if (mode == InitMode::Zero) {
    AmpState s;
    s.m_prev.assign(inst.n, 0.0);
    s.x_cur.assign(inst.n, 0.0);
    s.t = 0;
    return s;
  }
  return amp_init_spectral(inst, seed).state;
}

AmpState amp_step(const AmpState& state, const instance::SpikedInstance& inst, double coef,
                  bool onsager) {
  const std::size_t n = inst.n;
  if (state.x_cur.size() != n || state.m_prev.size() != n)
    throw std::invalid_argument("amp_step: state dimension mismatch");

  AmpState next;
  next.m_prev.resize(n);
  for (std::size_t i = 0; i < n; ++i) next.m_prev[i] = std::tanh(state.x_cur[i]);
  check_finite(next.m_prev, state.t, "magnetization");

  const double b =
      onsager ? coef * coef * (1.0 - simd::sum_sq(next.m_prev.data(), n) / static_cast<double>(n))
              : 0.0;

  next.x_cur.assign(n, 0.0);
  simd::symv(inst.m_matrix.data(), n, next.m_prev.data(), next.x_cur.data());
  for (std::size_t i = 0; i < n; ++i)
    next.x_cur[i] = coef * next.x_cur[i] - b * state.m_prev[i];
  check_finite(next.x_cur, state.t + 1, "iterate");
  next.t = state.t + 1;
  return next;
}

double state_correlation(const AmpState& state, const instance::SpikedInstance& inst) {
  if (state.x_cur.size() != inst.n)
    throw std::invalid_argument("state_correlation: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < inst.n; ++i)
    acc += std::tanh(state.x_cur[i]) * inst.spike[i];
  return acc / static_cast<double>(inst.n);
}

double amp_like_map(const instance::Spins& sigma, const instance::SpikedInstance& inst,
                    double beta, double lambda, const scalar::ModelParams& p) {
  if (sigma.size() != inst.n) throw std::invalid_argument("amp_like_map: dimension mismatch");
  const double r = instance::correlation(sigma, inst.spike);
  const scalar::AtResult at = scalar::at_condition(beta, beta * lambda * std::abs(r), p);
  if (!at.satisfied)
    throw std::domain_error("amp_like_map: stability condition fails at this correlation (margin " +
                            std::to_string(at.margin) + ")");
  return scalar::f_update(r, beta, lambda, p);
}

}  // namespace swlab::amp
