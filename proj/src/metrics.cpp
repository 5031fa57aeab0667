#include "drmean/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "drmean/error.hpp"
#include "drmean/stats.hpp"

namespace drm {

MetricsRow compute_metrics(std::span<const double> estimates, double mu_true,
                           AbsErrorSummary mae_kind) {
  if (estimates.empty()) throw Error(ErrorCode::EmptyInput, "no estimates to summarise");
  const double r = static_cast<double>(estimates.size());
  MetricsRow row;
  row.reps = estimates.size();

  // Accumulate in sorted order so permuting the replicates cannot change a bit.
  std::vector<double> sorted(estimates.begin(), estimates.end());
  std::sort(sorted.begin(), sorted.end());

  double sum = 0.0;
  for (double e : sorted) sum += e;
  const double mean = sum / r;
  row.bias = mean - mu_true;

  std::vector<double> abs_err(sorted.size());
  double sq = 0.0, centred = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double err = sorted[i] - mu_true;
    abs_err[i] = std::abs(err);
    sq += err * err;
    centred += (sorted[i] - mean) * (sorted[i] - mean);
  }
  row.mse = sq / r;
  row.rmse = std::sqrt(row.mse);
  if (mae_kind == AbsErrorSummary::Median) {
    row.mae = stats::median(abs_err);
  } else {
    double s = 0.0;
    for (double a : abs_err) s += a;
    row.mae = s / r;
  }

  if (estimates.size() >= 2) {
    row.var = centred / (r - 1.0);
    const double sd = std::sqrt(*row.var);
    if (sd > 0.0) {
      row.pct_bias = 100.0 * std::abs(row.bias) / sd;
    } else if (row.bias == 0.0) {
      row.pct_bias = 0.0;
    }
  }
  return row;
}

}  // namespace drm
