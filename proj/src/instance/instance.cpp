#include "swlab/instance/instance.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "swlab/rng.hpp"
#include "swlab/simd/kernels.hpp"

static_assert(std::endian::native == std::endian::little,
              "matrix dump format is little-endian; byte order conversion not implemented");

namespace swlab::instance {

SymMatrix sample_goe(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_goe: n must be positive");
  SymMatrix w(n);
  rng::Xoshiro256pp gen(seed);
  const double off_sd = 1.0 / std::sqrt(static_cast<double>(n));
  const double diag_sd = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    w.at(i, i) = diag_sd * gen.gaussian();
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = off_sd * gen.gaussian();
      w.at(i, j) = v;
      w.at(j, i) = v;
    }
  }
  return w;
}

Spins sample_spike(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_spike: n must be positive");
  Spins x(n);
  rng::Xoshiro256pp gen(seed);
  for (std::size_t i = 0; i < n; ++i) x[i] = (gen.next() >> 63) ? 1.0 : -1.0;
  return x;
}

namespace {

SpikedInstance assemble_impl(std::size_t n, double lambda, std::uint64_t master_seed,
                             Spins spike) {
  if (lambda < 0.0) throw std::invalid_argument("assemble: lambda must be >= 0");
  SpikedInstance inst;
  inst.n = n;
  inst.lambda = lambda;
  inst.seed = master_seed;
  inst.spike = std::move(spike);
  inst.noise = sample_goe(n, rng::mix_seed(master_seed, rng::kTagNoise));
  inst.m_matrix = SymMatrix(n);
  const double scale = lambda / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      inst.m_matrix.at(i, j) = inst.noise.at(i, j) + scale * inst.spike[i] * inst.spike[j];
  return inst;
}

}  // namespace

SpikedInstance assemble(std::size_t n, double lambda, std::uint64_t master_seed) {
  return assemble_impl(n, lambda, master_seed,
                       sample_spike(n, rng::mix_seed(master_seed, rng::kTagSpike)));
}

SpikedInstance assemble_uniform_spike(std::size_t n, double lambda, std::uint64_t master_seed) {
  if (n == 0) throw std::invalid_argument("assemble: n must be positive");
  return assemble_impl(n, lambda, master_seed, Spins(n, 1.0));
}

double posterior_energy(const Spins& sigma, const SpikedInstance& inst, double beta) {
  if (sigma.size() != inst.n)
    throw std::invalid_argument("posterior_energy: configuration size mismatch");
  return 0.5 * beta * simd::quad_form(inst.m_matrix.data(), inst.n, sigma.data());
}

double correlation(const Spins& a, const Spins& b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("correlation: vectors must be non-empty and equal length");
  return simd::dot(a.data(), b.data(), a.size()) / static_cast<double>(a.size());
}

namespace {
constexpr char kMagic[8] = {'S', 'W', 'I', 'G', 'M', 'A', 'T', '1'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_matrix(const std::filesystem::path& path, const SymMatrix& m, double lambda) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_matrix: cannot open " + path.string());
  const std::uint32_t reserved = 0;
  const std::uint64_t n64 = m.n;
  out.write(kMagic, 8);
  out.write(reinterpret_cast<const char*>(&kVersion), 4);
  out.write(reinterpret_cast<const char*>(&reserved), 4);
  out.write(reinterpret_cast<const char*>(&n64), 8);
  out.write(reinterpret_cast<const char*>(&lambda), 8);
  out.write(reinterpret_cast<const char*>(m.a.data()),
            static_cast<std::streamsize>(m.a.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write_matrix: short write to " + path.string());
}

SymMatrix read_matrix(const std::filesystem::path& path, double* lambda_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_matrix: cannot open " + path.string());
  char magic[8];
  std::uint32_t version = 0, reserved = 0;
  std::uint64_t n64 = 0;
  double lambda = 0.0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&reserved), 4);
  in.read(reinterpret_cast<char*>(&n64), 8);
  in.read(reinterpret_cast<char*>(&lambda), 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("read_matrix: bad header in " + path.string());
  if (version != kVersion)
    throw std::runtime_error("read_matrix: unsupported version in " + path.string());
  SymMatrix m(static_cast<std::size_t>(n64));
  in.read(reinterpret_cast<char*>(m.a.data()),
          static_cast<std::streamsize>(m.a.size() * sizeof(double)));
  if (!in) throw std::runtime_error("read_matrix: truncated payload in " + path.string());
  if (lambda_out != nullptr) *lambda_out = lambda;
  return m;
}

}  // namespace swlab::instance
