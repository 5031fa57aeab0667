#include "drmean/loess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "drmean/error.hpp"
#include "drmean/least_squares.hpp"
#include "drmean/simd/kernels.hpp"

namespace drm {
namespace {

std::size_t neighbourhood_size(double span, std::size_t n) {
  const double raw = span * static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(raw - 1e-9 * raw));
}

struct LocalFit {
  double value;
  bool ok;
};

// Weighted polynomial in (x - g); the value at g is the intercept.
LocalFit local_polynomial(std::span<const double> x, std::span<const double> y,
                          std::span<const std::size_t> idx, std::span<const double> w, double g,
                          int degree) {
  const std::size_t m = idx.size();
  DesignMatrix design(m, static_cast<std::size_t>(degree) + 1, true);
  std::vector<double> yy(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double dx = x[idx[k]] - g;
    double pw = 1.0;
    for (int d = 1; d <= degree; ++d) {
      pw *= dx;
      design(k, static_cast<std::size_t>(d)) = pw;
    }
    yy[k] = y[idx[k]];
  }
  try {
    return {solve_least_squares(design, yy, w).coefficients[0], true};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RankDeficient) throw;
    return {0.0, false};
  }
}

double weighted_mean(std::span<const double> y, std::span<const std::size_t> idx,
                     std::span<const double> w) {
  double sw = 0.0, swy = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    sw += w[k];
    swy += w[k] * y[idx[k]];
  }
  if (sw > 0.0) return swy / sw;
  double s = 0.0;
  for (std::size_t i : idx) s += y[i];
  return s / static_cast<double>(idx.size());
}

}  // namespace

std::vector<double> loess_grid(std::span<const double> x, std::size_t count) {
  if (x.empty()) throw Error(ErrorCode::EmptyInput, "loess grid over empty data");
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = 0.5 * (lo + hi);
    return grid;
  }
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  grid.back() = hi;
  return grid;
}

LoessCurve loess_fit(std::span<const double> x, std::span<const double> y, double span, int degree,
                     std::span<const double> grid) {
  const std::size_t n = x.size();
  if (y.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "x has " + std::to_string(n) + " values, y has " + std::to_string(y.size()));
  }
  if (degree < 1 || degree > 2) {
    throw Error(ErrorCode::InvalidArgument, "loess degree must be 1 or 2");
  }
  if (!(span > 0.0 && span <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "loess span must lie in (0, 1]");
  }
  const std::size_t q = neighbourhood_size(span, n);
  const auto needed = static_cast<std::size_t>(degree) + 1;
  if (n < needed || q < needed) {
    throw Error(ErrorCode::SpanTooSmall, "neighbourhood of " + std::to_string(q) + " points for degree " +
                                             std::to_string(degree));
  }
  for (double g : grid) {
    if (!std::isfinite(g)) throw Error(ErrorCode::InvalidArgument, "non-finite loess grid value");
  }

  const auto& kernels = simd::active_kernels();
  LoessCurve curve;
  curve.points.reserve(grid.size());
  std::vector<std::size_t> order(n);
  std::vector<double> dist(n), sorted_dist(n), weights;

  for (double g : grid) {
    for (std::size_t i = 0; i < n; ++i) dist[i] = std::abs(x[i] - g);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
    for (std::size_t k = 0; k < n; ++k) sorted_dist[k] = dist[order[k]];

    // Extend over ties at the boundary distance.
    std::size_t m = q;
    while (m < n && sorted_dist[m] == sorted_dist[m - 1]) ++m;

    bool degenerate = false;
    double value = 0.0;
    for (;;) {
      const double dmax = sorted_dist[m - 1];
      std::span<const std::size_t> idx(order.data(), m);
      weights.assign(m, 1.0);
      if (dmax > 0.0) kernels.tricube(sorted_dist.data(), dmax, weights.data(), m);

      std::size_t positive = 0;
      for (double w : weights) positive += w > 0.0 ? 1 : 0;
      if (dmax == 0.0) {
        // Every neighbour sits at g: the local polynomial is just a mean.
        degenerate = true;
        value = weighted_mean(y, idx, weights);
        break;
      }
      if (positive >= needed) {
        const LocalFit local = local_polynomial(x, y, idx, weights, g, degree);
        if (local.ok) {
          value = local.value;
          break;
        }
      }
      degenerate = true;
      if (m < n) {
        // Widen to the next distance level.
        ++m;
        while (m < n && sorted_dist[m] == sorted_dist[m - 1]) ++m;
        continue;
      }
      // Whole sample used: retry with uniform weights, then the mean.
      weights.assign(m, 1.0);
      const LocalFit local = local_polynomial(x, y, idx, weights, g, degree);
      value = local.ok ? local.value : weighted_mean(y, idx, weights);
      break;
    }
    if (degenerate) ++curve.degenerate_points;
    curve.points.push_back({g, value});
  }
  return curve;
}

LoessCurve loess_fit(std::span<const double> x, std::span<const double> y,
                     const LoessOptions& options) {
  const std::vector<double> grid = loess_grid(x, options.grid_points);
  return loess_fit(x, y, options.span, options.degree, grid);
}

}  // namespace drm
