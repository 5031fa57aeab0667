#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "drmean/matrix.hpp"

namespace drm {

struct LinearFit {
  std::vector<double> coefficients;
  // x_i^T beta for every row of the design, including rows with zero weight.
  std::vector<double> fitted;
  // y_i - fitted_i for every row; NaN where y_i is NaN (unobserved rows that
  // were excluded through a zero weight).
  std::vector<double> residuals;
  std::vector<double> weights;
  std::size_t rank = 0;
};

// Pivot magnitude below this fraction of the largest pivot counts as rank loss.
inline constexpr double kRankTolerance = 1e-10;

// Minimises sum_i w_i (y_i - x_i^T beta)^2 by Householder QR with column
// pivoting on the sqrt(w)-scaled system. Rows with w_i = 0 are skipped
// entirely, so y may hold NaN there.
LinearFit solve_least_squares(const DesignMatrix& x, std::span<const double> y,
                              std::span<const double> w);

// Unit weights.
LinearFit solve_least_squares(const DesignMatrix& x, std::span<const double> y);

}  // namespace drm
