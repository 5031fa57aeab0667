#include "drmean/simd/kernels.hpp"

#include <algorithm>

namespace drm::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  double s = (s0 + s1) + (s2 + s3);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double weighted_dot_scalar(const double* w, const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += (w[i] * a[i]) * b[i];
    s1 += (w[i + 1] * a[i + 1]) * b[i + 1];
    s2 += (w[i + 2] * a[i + 2]) * b[i + 2];
    s3 += (w[i + 3] * a[i + 3]) * b[i + 3];
  }
  double s = (s0 + s1) + (s2 + s3);
  for (; i < n; ++i) s += (w[i] * a[i]) * b[i];
  return s;
}

double sum_scalar(const double* a, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i];
    s1 += a[i + 1];
    s2 += a[i + 2];
    s3 += a[i + 3];
  }
  double s = (s0 + s1) + (s2 + s3);
  for (; i < n; ++i) s += a[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void tricube_scalar(const double* d, double dmax, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double u = d[i] / dmax;
    const double c = 1.0 - (u * u) * u;
    out[i] = u < 1.0 ? (c * c) * c : 0.0;
  }
}

void hinge_scalar(const double* x, double knot, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(0.0, x[i] - knot);
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{Isa::Scalar,  dot_scalar,     weighted_dot_scalar, sum_scalar,
                                 axpy_scalar,  tricube_scalar, hinge_scalar};
  return table;
}

}  // namespace drm::simd
