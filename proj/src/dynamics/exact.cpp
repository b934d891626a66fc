#include "swlab/dynamics/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "swlab/scalar/quadrature.hpp"
#include "swlab/simd/kernels.hpp"

namespace swlab::dynamics {

namespace {

constexpr std::size_t kEnumerationLimit = 20;
constexpr std::size_t kDenseKernelLimit = 10;
constexpr std::size_t kDiagnosticLimit = 12;

void check_size(const IsingModel& model, std::size_t limit, const char* what) {
  model.validate();
  if (model.size() > limit)
    throw std::invalid_argument(std::string(what) + ": refusing n > " + std::to_string(limit));
}

// Visits all 2^n states in binary-reflected Gray-code order and reports
// H(state) = (beta/2) s^T J s + <h, s> for each, maintaining the quadratic
// form incrementally (O(n) per state).
template <class Visit>
void gray_sweep(const instance::SymMatrix& j, const std::vector<double>& h, double beta,
                Visit&& visit) {
  const std::size_t n = j.n;
  const std::size_t states = std::size_t{1} << n;
  std::vector<double> sigma(n, -1.0);
  std::vector<double> field(n, 0.0);  // J sigma
  simd::symv(j.data(), n, sigma.data(), field.data());
  double ej = simd::dot(sigma.data(), field.data(), n);
  double eh = 0.0;
  for (std::size_t i = 0; i < n; ++i) eh += h[i] * sigma[i];

  std::uint32_t mask = 0;
  visit(mask, 0.5 * beta * ej + eh);
  for (std::size_t k = 1; k < states; ++k) {
    const std::size_t i = static_cast<std::size_t>(std::countr_zero(k));
    mask ^= (std::uint32_t{1} << i);
    const double delta = -2.0 * sigma[i];  // new - old
    ej += 2.0 * delta * field[i] + delta * delta * j.at(i, i);
    eh += delta * h[i];
    simd::axpy(delta, j.row(i), field.data(), n);
    sigma[i] += delta;
    visit(mask, 0.5 * beta * ej + eh);
  }
}

// Normalizes log-weights in place into a probability vector; returns log Z.
double normalize_log_weights(std::vector<double>& logw) {
  const double top = *std::max_element(logw.begin(), logw.end());
  double z = 0.0;
  for (double lw : logw) z += std::exp(lw - top);
  for (double& lw : logw) lw = std::exp(lw - top) / z;
  return top + std::log(z);
}

std::vector<double> density_ratio(const std::vector<double>& nu,
                                  const std::vector<double>& pi) {
  if (nu.size() != pi.size())
    throw std::invalid_argument("dirichlet_diagnostic: nu must cover all states");
  double total = 0.0;
  for (double v : nu) {
    if (v < 0.0) throw std::invalid_argument("dirichlet_diagnostic: negative mass in nu");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("dirichlet_diagnostic: nu is not normalized");
  std::vector<double> f(nu.size());
  for (std::size_t s = 0; s < nu.size(); ++s) {
    if (pi[s] <= 0.0) throw std::domain_error("dirichlet_diagnostic: degenerate stationary law");
    if (nu[s] <= 0.0)
      throw std::domain_error("dirichlet_diagnostic: nu vanishes on a state of positive stationary mass");
    f[s] = nu[s] / pi[s];
  }
  return f;
}

}  // namespace

ExactResult exact_enumerate(const IsingModel& model, double beta) {
  check_size(model, kEnumerationLimit, "exact_enumerate");
  if (beta < 0.0) throw std::invalid_argument("exact_enumerate: beta must be >= 0");
  const std::size_t n = model.size();
  const std::size_t states = std::size_t{1} << n;

  ExactResult out;
  out.distribution.resize(states);
  gray_sweep(model.j, model.h, beta,
             [&](std::uint32_t mask, double lw) { out.distribution[mask] = lw; });

  std::vector<double> logw = out.distribution;  // keep H(s) for the energy mean
  out.partition_log = normalize_log_weights(out.distribution);

  out.site_means.assign(n, 0.0);
  for (std::size_t s = 0; s < states; ++s) {
    const double p = out.distribution[s];
    out.energy_mean += p * logw[s];
    for (std::size_t i = 0; i < n; ++i)
      out.site_means[i] += p * ((s >> i) & 1u ? 1.0 : -1.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.magnetization += out.site_means[i];
    out.overlap_mean += out.site_means[i] * out.site_means[i];
  }
  out.magnetization /= static_cast<double>(n);
  out.overlap_mean /= static_cast<double>(n);
  return out;
}

HeatBathRows heat_bath_rows(const IsingModel& model, double beta) {
  check_size(model, kDiagnosticLimit, "heat_bath_rows");
  if (beta < 0.0) throw std::invalid_argument("heat_bath_rows: beta must be >= 0");
  const std::size_t n = model.size();
  const std::size_t states = std::size_t{1} << n;

  HeatBathRows rows;
  rows.n = n;
  rows.flip.resize(states * n);
  std::vector<double> sigma(n), field(n);
  for (std::size_t s = 0; s < states; ++s) {
    for (std::size_t i = 0; i < n; ++i) sigma[i] = (s >> i) & 1u ? 1.0 : -1.0;
    std::fill(field.begin(), field.end(), 0.0);
    simd::symv(model.j.data(), n, sigma.data(), field.data());
    for (std::size_t i = 0; i < n; ++i) {
      const double local =
          beta * (field[i] - model.j.at(i, i) * sigma[i]) + model.h[i];
      // Pr[site i chosen] * Pr[resample lands on -sigma_i]
      rows.flip[s * n + i] =
          (1.0 - sigma[i] * std::tanh(local)) / (2.0 * static_cast<double>(n));
    }
  }
  return rows;
}

std::vector<double> glauber_kernel(const IsingModel& model, double beta) {
  check_size(model, kDenseKernelLimit, "glauber_kernel");
  const HeatBathRows rows = heat_bath_rows(model, beta);
  const std::size_t n = model.size();
  const std::size_t states = std::size_t{1} << n;
  std::vector<double> kernel(states * states, 0.0);
  for (std::size_t s = 0; s < states; ++s) {
    double self = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = rows.flip[s * n + i];
      kernel[s * states + (s ^ (std::size_t{1} << i))] = p;
      self -= p;
    }
    kernel[s * states + s] = self;
  }
  return kernel;
}

double detailed_balance_residual(const IsingModel& model, double beta) {
  const HeatBathRows rows = heat_bath_rows(model, beta);
  const ExactResult ex = exact_enumerate(model, beta);
  const std::size_t n = model.size();
  const std::size_t states = std::size_t{1} << n;
  double residual = 0.0;
  for (std::size_t s = 0; s < states; ++s)
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t t = s ^ (std::size_t{1} << i);
      if (t < s) continue;  // each edge once
      const double forward = ex.distribution[s] * rows.flip[s * n + i];
      const double backward = ex.distribution[t] * rows.flip[t * n + i];
      residual = std::max(residual, std::abs(forward - backward));
    }
  return residual;
}

std::vector<double> evolve_distribution(const IsingModel& model, double beta,
                                        std::vector<double> nu, std::uint64_t steps) {
  const HeatBathRows rows = heat_bath_rows(model, beta);
  const std::size_t n = model.size();
  const std::size_t states = std::size_t{1} << n;
  if (nu.size() != states)
    throw std::invalid_argument("evolve_distribution: nu must cover all states");
  std::vector<double> next(states);
  for (std::uint64_t t = 0; t < steps; ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < states; ++s) {
      const double mass = nu[s];
      if (mass == 0.0) continue;
      double self = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double p = rows.flip[s * n + i];
        next[s ^ (std::size_t{1} << i)] += mass * p;
        self -= p;
      }
      next[s] += mass * self;
    }
    nu.swap(next);
  }
  return nu;
}

TwoStageExactKernel rgd_exact_kernel(const instance::SpikedInstance& inst, double beta,
                                     int quad_nodes) {
  const std::size_t n = inst.n;
  if (n == 0 || n > kDiagnosticLimit)
    throw std::invalid_argument("rgd_exact_kernel: requires 1 <= n <= 12");
  if (beta < 0.0) throw std::invalid_argument("rgd_exact_kernel: beta must be >= 0");
  const std::size_t states = std::size_t{1} << n;
  const scalar::GaussHermite& gh = scalar::gauss_hermite(quad_nodes);

  // Per-state data: sk[s] = (beta/2) s^T W s, c[s] = <s, spike>.
  std::vector<double> sk(states);
  std::vector<double> overlap_with_spike(states);
  {
    std::vector<double> zero_field(n, 0.0);
    gray_sweep(inst.noise, zero_field, beta,
               [&](std::uint32_t mask, double lw) { sk[mask] = lw; });
    for (std::size_t s = 0; s < states; ++s) {
      double c = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        c += inst.spike[i] * ((s >> i) & 1u ? 1.0 : -1.0);
      overlap_with_spike[s] = c;
    }
  }

  TwoStageExactKernel kernel;
  kernel.n = n;
  kernel.class_of_state.resize(states);
  for (std::size_t s = 0; s < states; ++s)
    kernel.class_of_state[s] =
        static_cast<std::uint8_t>((overlap_with_spike[s] + static_cast<double>(n)) / 2.0 + 0.5);

  // Stationary law mu_{beta M}: (beta/2) s^T M s = sk[s] + (beta lambda / 2n) c^2.
  kernel.stationary.resize(states);
  for (std::size_t s = 0; s < states; ++s)
    kernel.stationary[s] = sk[s] + 0.5 * beta * inst.lambda *
                                      overlap_with_spike[s] * overlap_with_spike[s] /
                                      static_cast<double>(n);
  normalize_log_weights(kernel.stationary);

  // One row per overlap class: integrate the Gaussian perturbation and, for
  // each z, take the exact conditional mu_{beta W, z spike}.
  const double bl = beta * inst.lambda;
  const double sd = std::sqrt(bl / static_cast<double>(n));
  kernel.rows.assign(n + 1, std::vector<double>(states, 0.0));
  std::vector<double> logits(states);
  for (std::size_t k = 0; k <= n; ++k) {
    const double r = (2.0 * static_cast<double>(k) - static_cast<double>(n)) /
                     static_cast<double>(n);
    const double mean_z = bl * r;
    for (std::size_t node = 0; node < gh.nodes.size(); ++node) {
      const double z = mean_z + sd * gh.nodes[node];
      for (std::size_t s = 0; s < states; ++s)
        logits[s] = sk[s] + z * overlap_with_spike[s];
      const double top = *std::max_element(logits.begin(), logits.end());
      double zsum = 0.0;
      for (double& l : logits) {
        l = std::exp(l - top);
        zsum += l;
      }
      const double w = gh.weights[node] / zsum;
      for (std::size_t s = 0; s < states; ++s) kernel.rows[k][s] += w * logits[s];
    }
  }
  return kernel;
}

double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("tv_distance: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

double stationarity_residual(const TwoStageExactKernel& kernel) {
  const std::size_t states = kernel.stationary.size();
  std::vector<double> class_mass(kernel.rows.size(), 0.0);
  for (std::size_t s = 0; s < states; ++s)
    class_mass[kernel.class_of_state[s]] += kernel.stationary[s];
  std::vector<double> pushed(states, 0.0);
  for (std::size_t k = 0; k < kernel.rows.size(); ++k) {
    if (class_mass[k] == 0.0) continue;
    for (std::size_t s = 0; s < states; ++s)
      pushed[s] += class_mass[k] * kernel.rows[k][s];
  }
  return tv_distance(pushed, kernel.stationary);
}

double dirichlet_diagnostic(const IsingModel& model, double beta,
                            const std::vector<double>& nu) {
  check_size(model, kDiagnosticLimit, "dirichlet_diagnostic");
  const ExactResult ex = exact_enumerate(model, beta);
  const std::vector<double> f = density_ratio(nu, ex.distribution);
  const HeatBathRows rows = heat_bath_rows(model, beta);
  const std::size_t n = model.size();
  const std::size_t states = std::size_t{1} << n;
  double form = 0.0;
  for (std::size_t s = 0; s < states; ++s) {
    const double fs = f[s];
    const double ls = std::log(fs);
    for (std::size_t i = 0; i < n; ++i) {
      const double ft = f[s ^ (std::size_t{1} << i)];
      form += ex.distribution[s] * rows.flip[s * n + i] * (fs - ft) * (ls - std::log(ft));
    }
  }
  return form;
}

double dirichlet_diagnostic(const instance::SpikedInstance& inst, double beta,
                            const std::vector<double>& nu, int quad_nodes) {
  const TwoStageExactKernel kernel = rgd_exact_kernel(inst, beta, quad_nodes);
  const std::vector<double> f = density_ratio(nu, kernel.stationary);
  const std::size_t states = kernel.stationary.size();
  std::vector<double> logf(states);
  for (std::size_t s = 0; s < states; ++s) logf[s] = std::log(f[s]);
  double form = 0.0;
  for (std::size_t s = 0; s < states; ++s) {
    const std::vector<double>& row = kernel.row_for(static_cast<std::uint32_t>(s));
    const double fs = f[s];
    const double ls = logf[s];
    double acc = 0.0;
    for (std::size_t t = 0; t < states; ++t)
      acc += row[t] * (fs - f[t]) * (ls - logf[t]);
    form += kernel.stationary[s] * acc;
  }
  return form;
}

}  // namespace swlab::dynamics
