#pragma once

// Data-parallel inner loops used by the least-squares, loess and basis code.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant selected at runtime. Reductions use four interleaved partial sums
// (lane k accumulates elements i with i % 4 == k) combined as
// (s0 + s1) + (s2 + s3), followed by a sequential tail. The scalar reference
// follows exactly the same order, so both variants produce bitwise-identical
// results and simulation output does not depend on the host ISA.

#include <cstddef>
#include <span>
#include <string_view>

namespace drm::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i w[i] * a[i] * b[i], evaluated as (w[i] * a[i]) * b[i]
  double (*weighted_dot)(const double* w, const double* a, const double* b, std::size_t n);
  // sum_i a[i]
  double (*sum)(const double* a, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[i] = (1 - (d[i] / dmax)^3)^3 for d[i] < dmax, else 0
  void (*tricube)(const double* d, double dmax, double* out, std::size_t n);
  // out[i] = max(0, x[i] - knot)
  void (*hinge)(const double* x, double knot, double* out, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

// nullptr when the build or the host CPU lacks AVX2.
const KernelTable* avx2_kernels() noexcept;

// Best table for this host. DRMEAN_SIMD=scalar|avx2 in the environment
// overrides the choice (an unavailable request falls back to scalar).
const KernelTable& active_kernels() noexcept;

// Convenience wrappers over active_kernels().
double dot(std::span<const double> a, std::span<const double> b);
double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b);
double sum(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace drm::simd
