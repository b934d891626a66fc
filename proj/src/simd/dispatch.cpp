#include <atomic>
#include <cstdlib>
#include <cstring>

#include "swlab/simd/kernels.hpp"

#if SWLAB_HAVE_AVX2_KERNELS
namespace swlab::simd::avx2 {
double dot(const double*, const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
double sum(const double*, std::size_t);
double sum_sq(const double*, std::size_t);
}  // namespace swlab::simd::avx2
#endif
#if SWLAB_HAVE_NEON_KERNELS
namespace swlab::simd::neon {
double dot(const double*, const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
double sum(const double*, std::size_t);
double sum_sq(const double*, std::size_t);
}  // namespace swlab::simd::neon
#endif

namespace swlab::simd {

namespace {

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*sum_sq)(const double*, std::size_t);
  const char* isa;
};

constexpr KernelTable kScalarTable{ref::dot, ref::axpy, ref::sum, ref::sum_sq, "scalar"};

std::atomic<bool> g_force_scalar{false};

bool env_forces_scalar() {
  const char* v = std::getenv("SWLAB_SIMD");
  return v != nullptr && std::strcmp(v, "scalar") == 0;
}

KernelTable detect() {
  if (g_force_scalar.load(std::memory_order_relaxed) || env_forces_scalar()) return kScalarTable;
#if SWLAB_HAVE_AVX2_KERNELS
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return KernelTable{avx2::dot, avx2::axpy, avx2::sum, avx2::sum_sq, "avx2"};
#endif
#if SWLAB_HAVE_NEON_KERNELS
  return KernelTable{neon::dot, neon::axpy, neon::sum, neon::sum_sq, "neon"};
#endif
  return kScalarTable;
}

// Rebuilt when force_scalar toggles; reads are racy-free via the atomic flag
// guard in tests (toggling mid-computation is not supported).
KernelTable& table() {
  static KernelTable t = detect();
  return t;
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) { return table().dot(a, b, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) {
  table().axpy(alpha, x, y, n);
}
double sum(const double* x, std::size_t n) { return table().sum(x, n); }
double sum_sq(const double* x, std::size_t n) { return table().sum_sq(x, n); }

void symv(const double* a, std::size_t n, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] = dot(a + i * n, x, n);
}

double quad_form(const double* a, std::size_t n, const double* x) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * dot(a + i * n, x, n);
  return s;
}

std::string_view active_isa() { return table().isa; }

void force_scalar(bool on) {
  g_force_scalar.store(on, std::memory_order_relaxed);
  table() = detect();
}

}  // namespace swlab::simd
