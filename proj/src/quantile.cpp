#include "drmean/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "drmean/error.hpp"

namespace drm {

double sorted_quantile(std::span<const double> sorted, double prob) noexcept {
  const double h = static_cast<double>(sorted.size() - 1) * prob;
  const double lo = std::floor(h);
  const auto idx = static_cast<std::size_t>(lo);
  if (idx + 1 >= sorted.size()) return sorted.back();
  return sorted[idx] + (h - lo) * (sorted[idx + 1] - sorted[idx]);
}

std::vector<double> quantiles(std::span<const double> values, std::span<const double> probs) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "quantiles of an empty vector");
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::ProbOutOfRange, "probability " + std::to_string(p) + " outside [0,1]");
    }
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(probs.size());
  for (double p : probs) out.push_back(sorted_quantile(sorted, p));
  return out;
}

}  // namespace drm
