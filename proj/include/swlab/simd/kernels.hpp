#pragma once

#include <cstddef>
#include <string_view>

namespace swlab::simd {

// Dense double-precision kernels behind the hot loops (Glauber field updates,
// correlations, energies, matvecs). Each kernel has a scalar reference
// implementation (namespace ref) that defines the semantics; the dispatched
// entry points below bind at first use to the best variant the running CPU
// supports (AVX2+FMA on x86-64, NEON on aarch64, scalar otherwise). Vector
// variants may reassociate sums, so they are equivalence-tested against the
// reference to tight relative tolerance rather than bit equality.

// dot(a, b) = sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);
// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);
// sum_i x[i]
double sum(const double* x, std::size_t n);
// sum_i x[i]^2
double sum_sq(const double* x, std::size_t n);

// y = A x for symmetric row-major A (n x n); row-wise dot products.
void symv(const double* a, std::size_t n, const double* x, double* y);
// x' A x for symmetric row-major A.
double quad_form(const double* a, std::size_t n, const double* x);

// Name of the active kernel set: "avx2", "neon", or "scalar".
std::string_view active_isa();

// Force the scalar reference kernels (testing hook). The environment
// variable SWLAB_SIMD=scalar has the same effect at startup.
void force_scalar(bool on);

namespace ref {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sum(const double* x, std::size_t n);
double sum_sq(const double* x, std::size_t n);
}  // namespace ref

}  // namespace swlab::simd
