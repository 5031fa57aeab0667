#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "drmean/logistic.hpp"
#include "drmean/matrix.hpp"

namespace drm {

inline constexpr double kDefaultClipEpsilon = 1e-6;

struct PropensityScores {
  std::vector<double> pi_hat;   // clipped to [eps, 1 - eps]
  std::vector<double> eta_hat;  // logit of the clipped values
  double clip_epsilon = kDefaultClipEpsilon;
  std::size_t clipped_count = 0;
};

PropensityScores make_propensity_scores(const LogisticFit& fit,
                                        double epsilon = kDefaultClipEpsilon);
PropensityScores make_propensity_scores(std::span<const double> probabilities,
                                        double epsilon = kDefaultClipEpsilon);

enum class BasisKind { SplineLogit, QuintileIndicators, SquaredLp };

std::string to_string(BasisKind kind);
BasisKind parse_basis_kind(const std::string& text);

struct BasisSpec {
  BasisKind kind = BasisKind::SplineLogit;
  // Spline only. Empty means knots at the quintiles of eta over all units.
  std::vector<double> knots;
  // Indicators only.
  std::size_t strata = 5;
};

// Columns (eta - k_j)_+ for each knot; no linear term.
DesignMatrix make_spline_basis(std::span<const double> eta, std::span<const double> knots);

// Knots at the (j / (count + 1)) quantiles of eta, j = 1..count; tied
// quantiles collapse to one knot.
std::vector<double> quantile_knots(std::span<const double> eta, std::size_t count = 4);

struct IndicatorBasis {
  DesignMatrix columns;      // one column per non-reference occupied bin
  std::vector<double> cuts;  // distinct cut points actually used
  std::size_t bins = 0;      // occupied bins after merging
  bool merged = false;       // tied cut points or empty bins were merged away
};

IndicatorBasis make_quintile_indicator_basis(std::span<const double> pi, std::size_t strata = 5);

DesignMatrix make_squared_lp_basis(std::span<const double> eta);

}  // namespace drm
