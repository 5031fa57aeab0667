#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace drm {

struct LoessOptions {
  double span = 2.0 / 3.0;
  int degree = 1;
  std::size_t grid_points = 100;
};

struct CurvePoint {
  double x;
  double value;
};

struct LoessCurve {
  std::vector<CurvePoint> points;
  // Grid points whose neighbourhood could not support the requested degree
  // and fell back to a widened neighbourhood or a local weighted mean.
  std::size_t degenerate_points = 0;
};

// `count` equally spaced points over [min(x), max(x)].
std::vector<double> loess_grid(std::span<const double> x, std::size_t count);

// Local polynomial smoother with tricube weights over the ceil(span * n)
// nearest neighbours of each grid value. The bandwidth is the largest
// neighbour distance, and every point tied at that distance joins the
// neighbourhood.
LoessCurve loess_fit(std::span<const double> x, std::span<const double> y, double span, int degree,
                     std::span<const double> grid);

LoessCurve loess_fit(std::span<const double> x, std::span<const double> y,
                     const LoessOptions& options);

}  // namespace drm
