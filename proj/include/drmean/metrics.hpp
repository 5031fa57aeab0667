#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

namespace drm {

enum class AbsErrorSummary { Median, Mean };

struct MetricsRow {
  std::string estimator;
  std::size_t reps = 0;
  double bias = 0.0;                 // mean(est) - mu
  std::optional<double> pct_bias;    // 100 |bias| / sd(est); needs R >= 2
  double rmse = 0.0;
  double mae = 0.0;                  // median (default) or mean |est - mu|
  std::optional<double> var;         // divisor R - 1; needs R >= 2
  double mse = 0.0;                  // mean((est - mu)^2)
};

MetricsRow compute_metrics(std::span<const double> estimates, double mu_true,
                           AbsErrorSummary mae_kind = AbsErrorSummary::Median);

}  // namespace drm
