#include "swlab/scalar/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace swlab::scalar {

namespace {

// Implicit-shift QL on a symmetric tridiagonal matrix, accumulating only the
// first row of the eigenvector matrix (Golub-Welsch needs nothing else: the
// quadrature weight of eigenvalue j is that first-row component squared).
// d: diagonal (in: matrix, out: eigenvalues), e: off-diagonal (destroyed),
// z: in: first unit row, out: first row of the orthogonal eigenvector matrix.
void tql_first_row(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
  const int n = static_cast<int>(d.size());
  if (n == 1) return;
  e.push_back(0.0);  // sentinel e[n-1]
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw std::runtime_error("gauss_hermite: QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  e.pop_back();
}

GaussHermite build(int n) {
  // Jacobi matrix of the probabilists' Hermite polynomials (weight ~ N(0,1)):
  // zero diagonal, off-diagonal sqrt(k). Eigenvalues are the nodes; squared
  // first eigenvector components are the normalized weights.
  std::vector<double> d(n, 0.0);
  std::vector<double> e(n - 1);
  for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(static_cast<double>(k));
  std::vector<double> z(n, 0.0);
  z[0] = 1.0;
  tql_first_row(d, e, z);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

  GaussHermite gh;
  gh.nodes.resize(n);
  gh.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    gh.nodes[i] = d[order[i]];
    gh.weights[i] = z[order[i]] * z[order[i]];
  }

  // Enforce the exact +/- symmetry of the rule (it holds analytically; the
  // eigensolver breaks it only at rounding level) and renormalize.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (gh.nodes[j] - gh.nodes[i]);
    gh.nodes[j] = x;
    gh.nodes[i] = -x;
    const double w = 0.5 * (gh.weights[i] + gh.weights[j]);
    gh.weights[i] = w;
    gh.weights[j] = w;
  }
  gh.nodes[n / 2] = 0.0;
  const double total = std::accumulate(gh.weights.begin(), gh.weights.end(), 0.0);
  for (double& w : gh.weights) w /= total;
  return gh;
}

}  // namespace

const GaussHermite& gauss_hermite(int n) {
  if (n < 21 || n % 2 == 0)
    throw std::invalid_argument("gauss_hermite: node count must be odd and >= 21, got " +
                                std::to_string(n));
  static std::mutex mu;
  static std::map<int, GaussHermite> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build(n)).first;
  return it->second;
}

}  // namespace swlab::scalar
