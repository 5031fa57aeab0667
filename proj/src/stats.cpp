#include "drmean/stats.hpp"

#include <cmath>
#include <vector>

#include "drmean/error.hpp"
#include "drmean/quantile.hpp"

namespace drm::stats {

double mean(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::EmptyInput, "mean of an empty vector");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
  if (v.size() < 2) throw Error(ErrorCode::TooFewUnits, "variance needs at least two values");
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

double correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw Error(ErrorCode::DimensionMismatch, "correlation needs two equal-length vectors");
  }
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  const double r = sab / std::sqrt(saa * sbb);
  return std::fmax(-1.0, std::fmin(1.0, r));
}

double median(std::span<const double> v) {
  const double half = 0.5;
  return quantiles(v, std::span<const double>(&half, 1)).front();
}

}  // namespace drm::stats
