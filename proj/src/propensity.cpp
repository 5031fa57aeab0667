#include "drmean/propensity.hpp"

#include <algorithm>
#include <cmath>

#include "drmean/error.hpp"
#include "drmean/quantile.hpp"
#include "drmean/simd/kernels.hpp"

namespace drm {

PropensityScores make_propensity_scores(std::span<const double> probabilities, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw Error(ErrorCode::EpsilonOutOfRange,
                "clip epsilon " + std::to_string(epsilon) + " outside (0, 0.5)");
  }
  PropensityScores ps;
  ps.clip_epsilon = epsilon;
  ps.pi_hat.reserve(probabilities.size());
  ps.eta_hat.reserve(probabilities.size());
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::ProbOutOfRange, "propensity " + std::to_string(p) + " outside [0,1]");
    }
    const double clipped = std::clamp(p, epsilon, 1.0 - epsilon);
    if (clipped != p) ++ps.clipped_count;
    ps.pi_hat.push_back(clipped);
    ps.eta_hat.push_back(logit(clipped));
  }
  return ps;
}

PropensityScores make_propensity_scores(const LogisticFit& fit, double epsilon) {
  return make_propensity_scores(fit.probabilities, epsilon);
}

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::SplineLogit:
      return "spline";
    case BasisKind::QuintileIndicators:
      return "quintile";
    case BasisKind::SquaredLp:
      return "squared";
  }
  return "unknown";
}

BasisKind parse_basis_kind(const std::string& text) {
  if (text == "spline" || text == "spline_logit") return BasisKind::SplineLogit;
  if (text == "quintile" || text == "quintile_indicators") return BasisKind::QuintileIndicators;
  if (text == "squared" || text == "squared_lp") return BasisKind::SquaredLp;
  throw Error(ErrorCode::ConfigError, "unknown basis kind '" + text + "'");
}

DesignMatrix make_spline_basis(std::span<const double> eta, std::span<const double> knots) {
  for (std::size_t j = 1; j < knots.size(); ++j) {
    if (!(knots[j] > knots[j - 1])) {
      throw Error(ErrorCode::KnotsNotIncreasing,
                  "knot " + std::to_string(j) + " does not exceed its predecessor");
    }
  }
  const auto& kernels = simd::active_kernels();
  DesignMatrix basis(eta.size(), knots.size());
  for (std::size_t j = 0; j < knots.size(); ++j) {
    kernels.hinge(eta.data(), knots[j], basis.column(j).data(), eta.size());
  }
  return basis;
}

std::vector<double> quantile_knots(std::span<const double> eta, std::size_t count) {
  std::vector<double> probs(count);
  for (std::size_t j = 0; j < count; ++j) {
    probs[j] = static_cast<double>(j + 1) / static_cast<double>(count + 1);
  }
  std::vector<double> knots = quantiles(eta, probs);
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  return knots;
}

IndicatorBasis make_quintile_indicator_basis(std::span<const double> pi, std::size_t strata) {
  if (strata < 2) throw Error(ErrorCode::InvalidArgument, "strata must be at least 2");
  if (pi.size() < strata) {
    throw Error(ErrorCode::TooFewUnits, std::to_string(pi.size()) + " units for " +
                                            std::to_string(strata) + " strata");
  }
  std::vector<double> probs(strata - 1);
  for (std::size_t j = 0; j + 1 < strata; ++j) {
    probs[j] = static_cast<double>(j + 1) / static_cast<double>(strata);
  }
  IndicatorBasis out;
  out.cuts = quantiles(pi, probs);
  const std::size_t raw_cuts = out.cuts.size();
  out.cuts.erase(std::unique(out.cuts.begin(), out.cuts.end()), out.cuts.end());
  out.merged = out.cuts.size() != raw_cuts;

  // Bin b holds pi in (cut_{b-1}, cut_b]; bin 0 is [min, cut_0].
  std::vector<std::size_t> bin(pi.size());
  std::vector<std::size_t> occupancy(out.cuts.size() + 1, 0);
  for (std::size_t i = 0; i < pi.size(); ++i) {
    bin[i] = static_cast<std::size_t>(
        std::lower_bound(out.cuts.begin(), out.cuts.end(), pi[i]) - out.cuts.begin());
    ++occupancy[bin[i]];
  }
  std::vector<std::size_t> column_of(occupancy.size(), 0);
  std::size_t occupied = 0;
  for (std::size_t b = 0; b < occupancy.size(); ++b) {
    if (occupancy[b] == 0) {
      out.merged = true;
      continue;
    }
    column_of[b] = occupied++;  // first occupied bin is the reference
  }
  out.bins = occupied;
  out.columns = DesignMatrix(pi.size(), occupied > 0 ? occupied - 1 : 0);
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const std::size_t c = column_of[bin[i]];
    if (c > 0) out.columns(i, c - 1) = 1.0;
  }
  return out;
}

DesignMatrix make_squared_lp_basis(std::span<const double> eta) {
  DesignMatrix basis(eta.size(), 1);
  auto col = basis.column(0);
  for (std::size_t i = 0; i < eta.size(); ++i) col[i] = eta[i] * eta[i];
  return basis;
}

}  // namespace drm
