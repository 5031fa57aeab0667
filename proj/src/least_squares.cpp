#include "drmean/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "drmean/error.hpp"
#include "drmean/simd/kernels.hpp"

namespace drm {
namespace {

// Compact column-major working copy of the rows with positive weight.
struct ScaledSystem {
  std::size_t m = 0;
  std::size_t p = 0;
  std::vector<double> a;
  std::vector<double> b;

  double* col(std::size_t j) { return a.data() + j * m; }
};

ScaledSystem build_system(const DesignMatrix& x, std::span<const double> y,
                          std::span<const double> w) {
  std::vector<std::size_t> active;
  active.reserve(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    if (!(w[i] >= 0.0) || !std::isfinite(w[i])) {
      throw Error(ErrorCode::InvalidArgument,
                  "weight at row " + std::to_string(i) + " is negative or not finite");
    }
    if (w[i] > 0.0) {
      if (!std::isfinite(y[i])) {
        throw Error(ErrorCode::InvalidArgument,
                    "response at row " + std::to_string(i) + " is not finite");
      }
      active.push_back(i);
    }
  }
  if (active.size() < x.cols()) {
    throw Error(ErrorCode::RankDeficient, std::to_string(active.size()) +
                                              " rows with positive weight for " +
                                              std::to_string(x.cols()) + " coefficients");
  }

  ScaledSystem s;
  s.m = active.size();
  s.p = x.cols();
  s.a.resize(s.m * s.p);
  s.b.resize(s.m);
  std::vector<double> root(s.m);
  for (std::size_t k = 0; k < s.m; ++k) root[k] = std::sqrt(w[active[k]]);
  for (std::size_t j = 0; j < s.p; ++j) {
    auto src = x.column(j);
    double* dst = s.col(j);
    for (std::size_t k = 0; k < s.m; ++k) dst[k] = root[k] * src[active[k]];
  }
  for (std::size_t k = 0; k < s.m; ++k) s.b[k] = root[k] * y[active[k]];
  return s;
}

}  // namespace

LinearFit solve_least_squares(const DesignMatrix& x, std::span<const double> y,
                              std::span<const double> w) {
  if (y.size() != x.rows() || w.size() != x.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "design has " + std::to_string(x.rows()) + " rows, y has " +
                    std::to_string(y.size()) + ", w has " + std::to_string(w.size()));
  }
  if (x.cols() == 0) throw Error(ErrorCode::DimensionMismatch, "design has no columns");

  const auto& k = simd::active_kernels();
  ScaledSystem s = build_system(x, y, w);
  const std::size_t m = s.m;
  const std::size_t p = s.p;

  std::vector<std::size_t> perm(p);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<double> diag(p, 0.0);
  double largest_pivot = 0.0;

  for (std::size_t j = 0; j < p; ++j) {
    // Pivot: remaining column with the largest trailing norm. Norms are
    // recomputed rather than downdated; p is small.
    std::size_t best = j;
    double best_norm = -1.0;
    for (std::size_t c = j; c < p; ++c) {
      const double* col = s.col(c) + j;
      const double nrm = k.dot(col, col, m - j);
      if (nrm > best_norm) {
        best_norm = nrm;
        best = c;
      }
    }
    if (best != j) {
      std::swap_ranges(s.col(j), s.col(j) + m, s.col(best));
      std::swap(perm[j], perm[best]);
    }

    const double norm = std::sqrt(best_norm);
    if (j == 0) largest_pivot = norm;
    if (norm == 0.0 || norm < kRankTolerance * largest_pivot) {
      throw Error(ErrorCode::RankDeficient, "numerical rank " + std::to_string(j) + " < " +
                                                std::to_string(p) + " columns");
    }

    double* v = s.col(j) + j;
    const double alpha = v[0] > 0.0 ? -norm : norm;
    v[0] -= alpha;
    const double vtv = k.dot(v, v, m - j);
    for (std::size_t c = j + 1; c < p; ++c) {
      double* target = s.col(c) + j;
      const double tau = 2.0 * k.dot(v, target, m - j) / vtv;
      k.axpy(-tau, v, target, m - j);
    }
    const double tau_b = 2.0 * k.dot(v, s.b.data() + j, m - j) / vtv;
    k.axpy(-tau_b, v, s.b.data() + j, m - j);
    diag[j] = alpha;
  }

  // Back substitution on R (upper triangle above the stored reflectors).
  std::vector<double> z(p);
  for (std::size_t jj = p; jj-- > 0;) {
    double acc = s.b[jj];
    for (std::size_t c = jj + 1; c < p; ++c) acc -= s.col(c)[jj] * z[c];
    z[jj] = acc / diag[jj];
  }

  LinearFit fit;
  fit.coefficients.assign(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) fit.coefficients[perm[j]] = z[j];
  fit.fitted = x.multiply(fit.coefficients);
  fit.residuals.resize(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) fit.residuals[i] = y[i] - fit.fitted[i];
  fit.weights.assign(w.begin(), w.end());
  fit.rank = p;
  return fit;
}

LinearFit solve_least_squares(const DesignMatrix& x, std::span<const double> y) {
  std::vector<double> ones(x.rows(), 1.0);
  return solve_least_squares(x, y, ones);
}

}  // namespace drm
