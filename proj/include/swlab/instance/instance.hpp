#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace swlab::instance {

// Dense symmetric matrix, row-major contiguous.
struct SymMatrix {
  std::size_t n = 0;
  std::vector<double> a;

  SymMatrix() = default;
  explicit SymMatrix(std::size_t size) : n(size), a(size * size, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  const double* row(std::size_t i) const { return a.data() + i * n; }
  double* row(std::size_t i) { return a.data() + i * n; }
  const double* data() const { return a.data(); }
};

// Spin configurations are +/-1 vectors stored as doubles so the dense kernels
// apply directly.
using Spins = std::vector<double>;

// Symmetric Gaussian noise with off-diagonal variance 1/n and diagonal
// variance 2/n. Entries are drawn row-major over the upper triangle from the
// stream seeded by `seed`. n == 0 is an input error.
SymMatrix sample_goe(std::size_t n, std::uint64_t seed);

// Uniform +/-1 spike.
Spins sample_spike(std::size_t n, std::uint64_t seed);

struct SpikedInstance {
  std::size_t n = 0;
  double lambda = 0.0;
  std::uint64_t seed = 0;  // master seed; sub-streams are derived from it
  Spins spike;
  SymMatrix noise;
  SymMatrix m_matrix;  // noise + (lambda/n) * spike spike^T, entrywise
};

// Samples spike and noise from independent derived streams and forms the
// observation matrix.
SpikedInstance assemble(std::size_t n, double lambda, std::uint64_t master_seed);

// Same, but with the deterministic all-ones spike (the 1-D projected chain
// lives on this instance family).
SpikedInstance assemble_uniform_spike(std::size_t n, double lambda, std::uint64_t master_seed);

// (beta/2) sigma^T M sigma. Dimension mismatch is an input error.
double posterior_energy(const Spins& sigma, const SpikedInstance& inst, double beta);

// <a, b> / n. Dimension mismatch is an input error.
double correlation(const Spins& a, const Spins& b);

// Binary matrix dump: 32-byte header (8-byte magic "SWIGMAT1", u32 version,
// u32 reserved, u64 n, f64 lambda) followed by n*n little-endian doubles,
// row-major.
void write_matrix(const std::filesystem::path& path, const SymMatrix& m, double lambda);
SymMatrix read_matrix(const std::filesystem::path& path, double* lambda_out = nullptr);

}  // namespace swlab::instance
