#include "drmean/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "drmean/error.hpp"
#include "drmean/least_squares.hpp"
#include "drmean/simd/kernels.hpp"

namespace drm {
namespace {

constexpr const char* kPlugInNote = "plug-in sandwich";
constexpr double kSpanTolerance = 1e-9;

std::size_t require_respondents(const Dataset& d) {
  d.validate();
  const std::size_t r = d.respondents();
  if (r == 0) throw Error(ErrorCode::NoRespondents, "no unit has t = 1");
  return r;
}

void require_regression_design(const DesignMatrix& x, std::size_t respondents) {
  if (!x.has_intercept()) {
    throw Error(ErrorCode::MissingIntercept, "regression estimators need an intercept column");
  }
  if (respondents < x.cols()) {
    throw Error(ErrorCode::RankDeficient, std::to_string(respondents) + " respondents for " +
                                              std::to_string(x.cols()) + " coefficients");
  }
}

void require_aligned(const Dataset& d, const PropensityScores& ps) {
  if (ps.pi_hat.size() != d.size() || ps.eta_hat.size() != d.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "propensities have " + std::to_string(ps.pi_hat.size()) + " entries for " +
                    std::to_string(d.size()) + " units");
  }
}

std::vector<double> response_weights(const Dataset& d) {
  std::vector<double> w(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) w[i] = d.t[i] ? 1.0 : 0.0;
  return w;
}

double max_inverse_weight(const Dataset& d, const PropensityScores& ps) {
  double m = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.t[i]) m = std::max(m, 1.0 / ps.pi_hat[i]);
  }
  return m;
}

double mean_of(std::span<const double> v) {
  return simd::sum(v) / static_cast<double>(v.size());
}

// Respondent-only fit of y on `x`; fitted values cover every unit.
LinearFit outcome_fit(const Dataset& d, const DesignMatrix& x, std::span<const double> weights) {
  return solve_least_squares(x, d.y, weights);
}

// Prediction average with the prediction-plus-respondent-residual influence form.
EstimatorResult regression_result(const Dataset& d, std::size_t respondents,
                                  const LinearFit& fit) {
  EstimatorResult r;
  r.n_respondents = respondents;
  r.mu_hat = mean_of(fit.fitted);
  std::vector<double> phi(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    phi[i] = fit.fitted[i] + (d.t[i] ? fit.residuals[i] : 0.0) - r.mu_hat;
  }
  r.se = sandwich_se(phi);
  r.notes.emplace_back(kPlugInNote);
  return r;
}

// m_i + g_i t_i (y_i - m_i) / pi_i averaged over units, with gate g_i.
template <typename Gate>
EstimatorResult augmented_result(const Dataset& d, const PropensityScores& ps,
                                 std::size_t respondents, const LinearFit& fit, Gate gate) {
  std::vector<double> contrib(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    contrib[i] = fit.fitted[i];
    if (d.t[i]) contrib[i] += gate(ps.pi_hat[i]) * fit.residuals[i] / ps.pi_hat[i];
  }
  EstimatorResult r;
  r.n_respondents = respondents;
  r.mu_hat = mean_of(contrib);
  for (double& c : contrib) c -= r.mu_hat;
  r.se = sandwich_se(contrib);
  r.max_weight = max_inverse_weight(d, ps);
  r.notes.emplace_back(kPlugInNote);
  if (ps.clipped_count > 0) r.notes.push_back("clipped " + std::to_string(ps.clipped_count) + " propensities");
  return r;
}

// True when `col` is (numerically) a linear combination of the columns of
// `design` over the respondents. Catches constant columns and the eta-hat
// column whenever the propensity model used the same covariates.
bool in_span(const DesignMatrix& design, std::span<const double> col, std::span<const double> w) {
  double norm2 = 0.0;
  for (std::size_t i = 0; i < col.size(); ++i) norm2 += w[i] * col[i] * col[i];
  if (norm2 == 0.0) return true;
  const LinearFit fit = solve_least_squares(design, col, w);
  double rss = 0.0;
  for (std::size_t i = 0; i < col.size(); ++i) rss += w[i] * fit.residuals[i] * fit.residuals[i];
  return rss <= kSpanTolerance * kSpanTolerance * norm2;
}

}  // namespace

std::string EstimatorConfig::id() const {
  switch (kind) {
    case EstimatorKind::NaiveMean:
      return "naive_mean";
    case EstimatorKind::Ols:
      return "mu_ols";
    case EstimatorKind::Ipw:
      return ipw_form == IpwForm::Hajek ? "mu_ipw_hajek" : "mu_ipw_ht";
    case EstimatorKind::BcOls:
      return "mu_bc_ols";
    case EstimatorKind::Wls:
      return "mu_wls";
    case EstimatorKind::PiCov:
      return "mu_pi_cov:" + to_string(basis.kind);
    case EstimatorKind::Hybrid:
      return hybrid_mode == HybridMode::Smooth ? "mu_hybrid_smooth" : "mu_hybrid";
  }
  return "unknown";
}

void EstimatorConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw Error(ErrorCode::EpsilonOutOfRange, "epsilon must lie in (0, 0.5)");
  }
  if (kind == EstimatorKind::Hybrid) {
    if (!(delta > 0.0 && delta < 0.5)) {
      throw Error(ErrorCode::InvalidArgument, "hybrid delta must lie in (0, 0.5)");
    }
    if (!(ramp_width > 0.0)) throw Error(ErrorCode::InvalidArgument, "ramp width must be positive");
  }
  if (kind == EstimatorKind::PiCov && basis.kind == BasisKind::QuintileIndicators &&
      basis.strata < 2) {
    throw Error(ErrorCode::InvalidArgument, "strata must be at least 2");
  }
}

EstimatorConfig parse_estimator(const std::string& name, const EstimatorConfig& defaults) {
  EstimatorConfig c = defaults;
  if (name == "naive_mean") {
    c.kind = EstimatorKind::NaiveMean;
  } else if (name == "mu_ols") {
    c.kind = EstimatorKind::Ols;
  } else if (name == "mu_ipw" || name == "mu_ipw_ht") {
    c.kind = EstimatorKind::Ipw;
    c.ipw_form = IpwForm::HorvitzThompson;
  } else if (name == "mu_ipw_hajek") {
    c.kind = EstimatorKind::Ipw;
    c.ipw_form = IpwForm::Hajek;
  } else if (name == "mu_bc_ols") {
    c.kind = EstimatorKind::BcOls;
  } else if (name == "mu_wls") {
    c.kind = EstimatorKind::Wls;
  } else if (name == "mu_pi_cov") {
    c.kind = EstimatorKind::PiCov;
  } else if (name.starts_with("mu_pi_cov:")) {
    c.kind = EstimatorKind::PiCov;
    c.basis.kind = parse_basis_kind(name.substr(10));
  } else if (name == "mu_hybrid") {
    c.kind = EstimatorKind::Hybrid;
    c.hybrid_mode = HybridMode::Hard;
  } else if (name == "mu_hybrid_smooth") {
    c.kind = EstimatorKind::Hybrid;
    c.hybrid_mode = HybridMode::Smooth;
  } else {
    throw Error(ErrorCode::ConfigError, "unknown estimator '" + name + "'");
  }
  return c;
}

double sandwich_se(std::span<const double> phi) {
  if (phi.empty()) return 0.0;
  for (double v : phi) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite influence value");
  }
  return std::sqrt(simd::dot(phi, phi)) / static_cast<double>(phi.size());
}

EstimatorResult naive_mean(const Dataset& d) {
  const std::size_t r = require_respondents(d);
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.t[i]) s += d.y[i];
  }
  EstimatorResult out;
  out.n_respondents = r;
  out.mu_hat = s / static_cast<double>(r);
  const double scale = static_cast<double>(d.size()) / static_cast<double>(r);
  std::vector<double> phi(d.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.t[i]) phi[i] = (d.y[i] - out.mu_hat) * scale;
  }
  out.se = sandwich_se(phi);
  return out;
}

EstimatorResult mu_ols(const Dataset& d) {
  const std::size_t r = require_respondents(d);
  require_regression_design(d.x, r);
  return regression_result(d, r, outcome_fit(d, d.x, response_weights(d)));
}

EstimatorResult mu_ipw(const Dataset& d, const PropensityScores& ps, IpwForm form) {
  const std::size_t r = require_respondents(d);
  require_aligned(d, ps);
  double weighted_y = 0.0, weight_sum = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!d.t[i]) continue;
    weighted_y += d.y[i] / ps.pi_hat[i];
    weight_sum += 1.0 / ps.pi_hat[i];
  }
  EstimatorResult out;
  out.n_respondents = r;
  out.max_weight = max_inverse_weight(d, ps);
  const double n = static_cast<double>(d.size());
  std::vector<double> phi(d.size(), 0.0);
  if (form == IpwForm::HorvitzThompson) {
    out.mu_hat = weighted_y / n;
    for (std::size_t i = 0; i < d.size(); ++i) {
      phi[i] = (d.t[i] ? d.y[i] / ps.pi_hat[i] : 0.0) - out.mu_hat;
    }
  } else {
    out.mu_hat = weighted_y / weight_sum;
    const double scale = n / weight_sum;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d.t[i]) phi[i] = (d.y[i] - out.mu_hat) / ps.pi_hat[i] * scale;
    }
  }
  out.se = sandwich_se(phi);
  out.notes.emplace_back(kPlugInNote);
  if (ps.clipped_count > 0) out.notes.push_back("clipped " + std::to_string(ps.clipped_count) + " propensities");
  return out;
}

EstimatorResult mu_bc_ols(const Dataset& d, const PropensityScores& ps) {
  const std::size_t r = require_respondents(d);
  require_regression_design(d.x, r);
  require_aligned(d, ps);
  const LinearFit fit = outcome_fit(d, d.x, response_weights(d));
  return augmented_result(d, ps, r, fit, [](double) { return 1.0; });
}

EstimatorResult mu_wls(const Dataset& d, const PropensityScores& ps) {
  const std::size_t r = require_respondents(d);
  require_regression_design(d.x, r);
  require_aligned(d, ps);
  std::vector<double> w(d.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.t[i]) w[i] = 1.0 / ps.pi_hat[i];
  }
  EstimatorResult out = regression_result(d, r, outcome_fit(d, d.x, w));
  out.max_weight = max_inverse_weight(d, ps);
  if (ps.clipped_count > 0) out.notes.push_back("clipped " + std::to_string(ps.clipped_count) + " propensities");
  return out;
}

AugmentedDesign augment_with_basis(const Dataset& d, const PropensityScores& ps,
                                   const BasisSpec& basis) {
  require_aligned(d, ps);
  AugmentedDesign out;
  DesignMatrix extra;
  switch (basis.kind) {
    case BasisKind::SplineLogit: {
      std::vector<double> knots = basis.knots;
      if (knots.empty()) {
        knots = quantile_knots(ps.eta_hat, 4);
        if (knots.size() < 4) {
          out.notes.push_back("tied eta quintiles: " + std::to_string(knots.size()) + " knots");
        }
      }
      extra = DesignMatrix(d.size(), 1);
      std::copy(ps.eta_hat.begin(), ps.eta_hat.end(), extra.column(0).begin());
      extra = extra.with_columns(make_spline_basis(ps.eta_hat, knots));
      break;
    }
    case BasisKind::QuintileIndicators: {
      IndicatorBasis ind = make_quintile_indicator_basis(ps.pi_hat, basis.strata);
      if (ind.merged) {
        out.notes.push_back("merged strata: " + std::to_string(ind.bins) + " occupied bins");
      }
      extra = std::move(ind.columns);
      break;
    }
    case BasisKind::SquaredLp:
      extra = make_squared_lp_basis(ps.eta_hat);
      break;
  }

  out.x = d.x;
  const std::vector<double> w = response_weights(d);
  for (std::size_t j = 0; j < extra.cols(); ++j) {
    if (in_span(out.x, extra.column(j), w)) {
      ++out.dropped;
      continue;
    }
    out.x.append_column(extra.column(j));
    ++out.added;
  }
  if (out.dropped > 0) {
    out.notes.push_back("dropped " + std::to_string(out.dropped) + " collinear basis columns");
  }
  return out;
}

EstimatorResult mu_pi_cov(const Dataset& d, const PropensityScores& ps, const BasisSpec& basis) {
  const std::size_t r = require_respondents(d);
  require_regression_design(d.x, r);
  AugmentedDesign aug = augment_with_basis(d, ps, basis);
  require_regression_design(aug.x, r);
  EstimatorResult out = regression_result(d, r, outcome_fit(d, aug.x, response_weights(d)));
  out.notes.insert(out.notes.end(), aug.notes.begin(), aug.notes.end());
  return out;
}

EstimatorResult mu_hybrid(const Dataset& d, const PropensityScores& ps, HybridMode mode,
                          double delta, double ramp_width) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "hybrid delta must lie in (0, 0.5)");
  }
  if (mode == HybridMode::Smooth && !(ramp_width > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "ramp width must be positive");
  }
  const std::size_t r = require_respondents(d);
  require_regression_design(d.x, r);
  require_aligned(d, ps);
  const LinearFit fit = outcome_fit(d, d.x, response_weights(d));
  if (mode == HybridMode::Hard) {
    return augmented_result(d, ps, r, fit, [delta](double p) { return p >= delta ? 1.0 : 0.0; });
  }
  return augmented_result(d, ps, r, fit, [delta, ramp_width](double p) {
    return 1.0 / (1.0 + std::exp(-(p - delta) / ramp_width));
  });
}

EstimatorResult estimate(const Dataset& d, const PropensityScores* ps,
                         const EstimatorConfig& config) {
  config.validate();
  if (config.needs_propensity() && ps == nullptr) {
    throw Error(ErrorCode::InvalidArgument, config.id() + " needs propensity scores");
  }
  switch (config.kind) {
    case EstimatorKind::NaiveMean:
      return naive_mean(d);
    case EstimatorKind::Ols:
      return mu_ols(d);
    case EstimatorKind::Ipw:
      return mu_ipw(d, *ps, config.ipw_form);
    case EstimatorKind::BcOls:
      return mu_bc_ols(d, *ps);
    case EstimatorKind::Wls:
      return mu_wls(d, *ps);
    case EstimatorKind::PiCov:
      return mu_pi_cov(d, *ps, config.basis);
    case EstimatorKind::Hybrid:
      return mu_hybrid(d, *ps, config.hybrid_mode, config.delta, config.ramp_width);
  }
  throw Error(ErrorCode::InvalidArgument, "unhandled estimator kind");
}

}  // namespace drm
