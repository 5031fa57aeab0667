#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "drmean/dataset.hpp"
#include "drmean/loess.hpp"
#include "drmean/propensity.hpp"

namespace drm {

enum class DiagnosticAxis { LogitPropensity, FittedValue };

struct DiagnosticPoint {
  double x;
  double residual;
  std::uint8_t group;  // the unit's t
  bool display;
};

struct GroupCurve {
  std::uint8_t group;
  LoessCurve curve;
};

struct DiagnosticPlotData {
  DiagnosticAxis x_axis = DiagnosticAxis::LogitPropensity;
  double subsample_fraction = 1.0;
  std::vector<DiagnosticPoint> points;
  std::vector<GroupCurve> curves;  // fitted on every point of the group
  std::vector<double> coefficients;  // the y-model fit on the fit group
};

struct DiagnosticRequest {
  std::uint8_t fit_group = 1;
  DiagnosticAxis axis = DiagnosticAxis::LogitPropensity;
  LoessOptions loess;
  double subsample_fraction = 0.2;
  std::uint64_t seed = 1;
};

// Residuals of an OLS y-model fit within `fit_group`, against eta-hat or the
// fitted values. Without y_full only respondents carry residuals.
DiagnosticPlotData residual_diagnostic(const Dataset& d, std::span<const double> y_full,
                                       const PropensityScores& ps,
                                       const DiagnosticRequest& request);

struct GroupResidualSummary {
  std::optional<double> respondent_mean;
  std::optional<double> nonrespondent_mean;
  double nonresponse_rate = 0.0;
  std::optional<double> implied_mu_ols_bias;
};

// Residuals are NaN where unavailable; nonrespondent fields are absent
// unless every nonrespondent has a residual.
GroupResidualSummary group_residual_summary(std::span<const double> residuals,
                                            std::span<const std::uint8_t> t);

// -(nonresponse rate) * (mean nonrespondent residual).
double implied_mu_ols_bias(double mean_nonrespondent_residual, double nonresponse_rate) noexcept;

}  // namespace drm
