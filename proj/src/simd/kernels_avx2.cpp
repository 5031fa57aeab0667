#include "drmean/simd/kernels.hpp"

#include <immintrin.h>

#include <algorithm>

// Compiled with -mavx2 only (no -mfma): multiply and add stay separate so the
// lanes reproduce the scalar reference bit for bit.

namespace drm::simd {
namespace {

inline double combine_lanes(__m256d acc) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double s = combine_lanes(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double weighted_dot_avx2(const double* w, const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wa = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(wa, _mm256_loadu_pd(b + i)));
  }
  double s = combine_lanes(acc);
  for (; i < n; ++i) s += (w[i] * a[i]) * b[i];
  return s;
}

double sum_avx2(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double s = combine_lanes(acc);
  for (; i < n; ++i) s += a[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void tricube_avx2(const double* d, double dmax, double* out, std::size_t n) {
  const __m256d vmax = _mm256_set1_pd(dmax);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d u = _mm256_div_pd(_mm256_loadu_pd(d + i), vmax);
    const __m256d c = _mm256_sub_pd(one, _mm256_mul_pd(_mm256_mul_pd(u, u), u));
    const __m256d w = _mm256_mul_pd(_mm256_mul_pd(c, c), c);
    const __m256d inside = _mm256_cmp_pd(u, one, _CMP_LT_OQ);
    _mm256_storeu_pd(out + i, _mm256_and_pd(inside, w));
  }
  for (; i < n; ++i) {
    const double u = d[i] / dmax;
    const double c = 1.0 - (u * u) * u;
    out[i] = u < 1.0 ? (c * c) * c : 0.0;
  }
}

void hinge_avx2(const double* x, double knot, double* out, std::size_t n) {
  const __m256d vk = _mm256_set1_pd(knot);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // max_pd(a, b) returns b when a is NaN; order matches std::max(0.0, v).
    const __m256d v = _mm256_sub_pd(_mm256_loadu_pd(x + i), vk);
    _mm256_storeu_pd(out + i, _mm256_max_pd(v, zero));
  }
  for (; i < n; ++i) out[i] = std::max(0.0, x[i] - knot);
}

}  // namespace

const KernelTable& avx2_table() noexcept {
  static const KernelTable table{Isa::Avx2, dot_avx2,     weighted_dot_avx2, sum_avx2,
                                 axpy_avx2, tricube_avx2, hinge_avx2};
  return table;
}

}  // namespace drm::simd
