#include "swlab/scalar/fixed_point.hpp"

#include <cmath>
#include <stdexcept>

#include "swlab/scalar/overlap.hpp"
#include "swlab/scalar/quadrature.hpp"

namespace swlab::scalar {

namespace {

// f with a warm-started overlap solve; qw carries the previous q across a scan.
double f_warm(double z, double beta, double lambda, const ModelParams& p, double& qw) {
  if (z == 0.0) return 0.0;
  const double sign = z > 0.0 ? 1.0 : -1.0;
  const double a = std::abs(z);
  const double h = beta * lambda * a;
  const OverlapSolution sol = detail::solve_q_from(beta, h, qw, p);
  qw = sol.q;
  return sign * gauss_expect_affine([](double x) { return std::tanh(x); },
                                    beta * std::sqrt(sol.q), h, p.quad_nodes);
}

}  // namespace

double f_update(double z, double beta, double lambda, const ModelParams& p) {
  p.validate();
  if (beta < 0.0 || lambda < 0.0) throw std::invalid_argument("f_update: beta, lambda >= 0");
  const double h = beta * lambda * std::abs(z);
  const double th = std::tanh(h);
  double qw = th * th;
  return f_warm(z, beta, lambda, p, qw);
}

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::SubCritical: return "SubCritical";
    case Regime::SuperCriticalHighTemp: return "SuperCriticalHighTemp";
    case Regime::LowTempWithFP: return "LowTempWithFP";
    case Regime::LowTempNoFP: return "LowTempNoFP";
  }
  return "unknown";
}

FixedPointReport find_opt(double beta, double lambda, const ModelParams& p) {
  p.validate();
  if (beta < 0.0 || lambda < 0.0) throw std::invalid_argument("find_opt: beta, lambda >= 0");

  constexpr int kGridPoints = 2001;  // [0, 1] inclusive
  const double dz = 1.0 / (kGridPoints - 1);

  FixedPointReport report;
  std::vector<double> roots{0.0};  // f(0) = 0 identically

  double qw = 0.0;
  double r_prev = 0.0;  // residual f(z)-z at previous grid point (z=0)
  for (int i = 1; i < kGridPoints; ++i) {
    const double z = i * dz;
    const double r = f_warm(z, beta, lambda, p, qw) - z;
    // Bracket sign changes strictly inside (z - dz, z]; the origin is already
    // recorded, so skip brackets that only touch zero through r_prev = 0.
    if (r == 0.0) {
      roots.push_back(z);
    } else if (i > 1 && r_prev * r < 0.0) {
      double lo = z - dz, hi = z, r_lo = r_prev;
      while (hi - lo > p.fp_tol) {
        const double mid = 0.5 * (lo + hi);
        double qb = qw;
        const double r_mid = f_warm(mid, beta, lambda, p, qb) - mid;
        if (r_mid == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((r_lo < 0.0) == (r_mid < 0.0)) {
          lo = mid;
          r_lo = r_mid;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    r_prev = r;
  }

  constexpr double kDerivStep = 1e-5;
  for (double z : roots) {
    FixedPointInfo info;
    info.z = z;
    double qa = 0.0, qb = 0.0;
    info.derivative = (f_warm(z + kDerivStep, beta, lambda, p, qa) -
                       f_warm(z - kDerivStep, beta, lambda, p, qb)) /
                      (2.0 * kDerivStep);
    info.stable = std::abs(info.derivative) < 1.0;
    const AtResult at = at_condition(beta, beta * lambda * z, p);
    info.at_satisfied = at.satisfied;
    info.at_margin = at.margin;
    report.fixed_points.push_back(info);
  }

  report.opt = 0.0;
  for (const FixedPointInfo& info : report.fixed_points)
    if (info.at_satisfied && info.z > report.opt) report.opt = info.z;

  const double bl = beta * lambda;
  bool has_valid_positive = false;
  for (const FixedPointInfo& info : report.fixed_points)
    if (info.z > 0.0 && info.at_satisfied) has_valid_positive = true;
  if (bl < 1.0)
    report.regime = Regime::SubCritical;
  else if (beta <= 1.0)
    report.regime = Regime::SuperCriticalHighTemp;
  else
    report.regime = has_valid_positive ? Regime::LowTempWithFP : Regime::LowTempNoFP;

  return report;
}

}  // namespace swlab::scalar
