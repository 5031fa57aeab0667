#pragma once

#include <span>
#include <vector>

namespace drm {

// Linear interpolation of order statistics at h = (n - 1) p.
std::vector<double> quantiles(std::span<const double> values, std::span<const double> probs);

// Same convention on already sorted input; no validation.
double sorted_quantile(std::span<const double> sorted, double prob) noexcept;

}  // namespace drm
