#include "drmean/diagnostics.hpp"

#include <cmath>

#include "drmean/error.hpp"
#include "drmean/least_squares.hpp"
#include "drmean/rng.hpp"

namespace drm {

DiagnosticPlotData residual_diagnostic(const Dataset& d, std::span<const double> y_full,
                                       const PropensityScores& ps,
                                       const DiagnosticRequest& request) {
  d.validate();
  const std::size_t n = d.size();
  const bool full = !y_full.empty();
  if (full && y_full.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "y_full length does not match the dataset");
  }
  if (ps.eta_hat.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "propensities do not match the dataset");
  }
  if (!(request.subsample_fraction >= 0.0 && request.subsample_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "subsample fraction must lie in [0, 1]");
  }

  auto available = [&](std::size_t i) { return full || d.t[i] == 1; };
  auto outcome = [&](std::size_t i) { return full ? y_full[i] : d.y[i]; };

  std::vector<double> y(n), w(n, 0.0);
  std::size_t fit_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = available(i) ? outcome(i) : std::nan("");
    if (available(i) && d.t[i] == request.fit_group) {
      w[i] = 1.0;
      ++fit_count;
    }
  }
  if (fit_count == 0) {
    throw Error(ErrorCode::EmptyFitGroup, "no unit with t = " + std::to_string(request.fit_group) +
                                              " has an available outcome");
  }
  const LinearFit fit = solve_least_squares(d.x, y, w);

  DiagnosticPlotData out;
  out.x_axis = request.axis;
  out.subsample_fraction = request.subsample_fraction;
  out.coefficients = fit.coefficients;
  const CounterRng rng(request.seed);
  std::vector<double> gx[2], gr[2];
  for (std::size_t i = 0; i < n; ++i) {
    if (!available(i)) continue;
    const double xc = request.axis == DiagnosticAxis::LogitPropensity ? ps.eta_hat[i] : fit.fitted[i];
    const bool show = rng.uniform({0, i, 0, Stream::Display}) <= request.subsample_fraction;
    out.points.push_back({xc, fit.residuals[i], d.t[i], show});
    gx[d.t[i]].push_back(xc);
    gr[d.t[i]].push_back(fit.residuals[i]);
  }
  for (std::uint8_t g = 0; g < 2; ++g) {
    if (gx[g].empty()) continue;
    const std::vector<double> grid = loess_grid(gx[g], request.loess.grid_points);
    out.curves.push_back({g, loess_fit(gx[g], gr[g], request.loess.span, request.loess.degree, grid)});
  }
  return out;
}

double implied_mu_ols_bias(double mean_nonrespondent_residual, double nonresponse_rate) noexcept {
  return -(nonresponse_rate * mean_nonrespondent_residual);
}

GroupResidualSummary group_residual_summary(std::span<const double> residuals,
                                            std::span<const std::uint8_t> t) {
  if (residuals.size() != t.size()) {
    throw Error(ErrorCode::DimensionMismatch, "residuals and indicators differ in length");
  }
  GroupResidualSummary s;
  if (t.empty()) return s;
  double sum[2] = {0.0, 0.0};
  std::size_t count[2] = {0, 0};
  bool complete[2] = {true, true};
  for (std::size_t i = 0; i < t.size(); ++i) {
    const int g = t[i] ? 1 : 0;
    ++count[g];
    if (std::isfinite(residuals[i])) {
      sum[g] += residuals[i];
    } else {
      complete[g] = false;
    }
  }
  s.nonresponse_rate = static_cast<double>(count[0]) / static_cast<double>(t.size());
  if (count[1] > 0 && complete[1]) s.respondent_mean = sum[1] / static_cast<double>(count[1]);
  if (count[0] > 0 && complete[0]) {
    s.nonrespondent_mean = sum[0] / static_cast<double>(count[0]);
    s.implied_mu_ols_bias = implied_mu_ols_bias(*s.nonrespondent_mean, s.nonresponse_rate);
  } else if (count[0] == 0) {
    s.implied_mu_ols_bias = 0.0;
  }
  return s;
}

}  // namespace drm
