#pragma once

#include <span>

namespace drm::stats {

double mean(std::span<const double> v);
// Sample variance with divisor n - 1.
double variance(std::span<const double> v);
double correlation(std::span<const double> a, std::span<const double> b);
double median(std::span<const double> v);

}  // namespace drm::stats
