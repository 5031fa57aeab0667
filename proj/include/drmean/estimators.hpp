#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drmean/dataset.hpp"
#include "drmean/propensity.hpp"

namespace drm {

enum class EstimatorKind { NaiveMean, Ols, Ipw, BcOls, Wls, PiCov, Hybrid };
enum class IpwForm { HorvitzThompson, Hajek };
enum class HybridMode { Hard, Smooth };

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::Ols;
  BasisSpec basis;                  // PiCov
  double epsilon = kDefaultClipEpsilon;
  double delta = 0.05;              // Hybrid threshold, in (0, 0.5)
  double ramp_width = 0.01;         // Hybrid smooth-mode scale h
  IpwForm ipw_form = IpwForm::HorvitzThompson;
  HybridMode hybrid_mode = HybridMode::Hard;

  bool needs_propensity() const noexcept {
    return kind != EstimatorKind::NaiveMean && kind != EstimatorKind::Ols;
  }
  // Stable identifier used in tables, e.g. "mu_pi_cov:spline".
  std::string id() const;
  void validate() const;
};

// Accepts the identifiers produced by EstimatorConfig::id() plus the short
// forms mu_ipw (Horvitz-Thompson), mu_pi_cov (basis from `defaults`) and
// mu_hybrid (hard threshold). Other fields are copied from `defaults`.
EstimatorConfig parse_estimator(const std::string& name, const EstimatorConfig& defaults = {});

struct EstimatorResult {
  double mu_hat = 0.0;
  std::optional<double> se;
  std::size_t n_respondents = 0;
  std::optional<double> max_weight;
  std::vector<std::string> notes;
};

EstimatorResult naive_mean(const Dataset& d);
EstimatorResult mu_ols(const Dataset& d);
EstimatorResult mu_ipw(const Dataset& d, const PropensityScores& ps, IpwForm form);
EstimatorResult mu_bc_ols(const Dataset& d, const PropensityScores& ps);
EstimatorResult mu_wls(const Dataset& d, const PropensityScores& ps);
EstimatorResult mu_pi_cov(const Dataset& d, const PropensityScores& ps, const BasisSpec& basis);
EstimatorResult mu_hybrid(const Dataset& d, const PropensityScores& ps, HybridMode mode,
                          double delta, double ramp_width);

// sqrt(sum phi_i^2) / n for centred influence contributions phi.
double sandwich_se(std::span<const double> phi);

// The pi-cov design: x plus the propensity basis columns. A basis column that
// is a linear combination of the design so far (over respondents) is dropped;
// this removes eta-hat itself when the propensity model used the same x.
// Exposed for diagnostics and tests.
struct AugmentedDesign {
  DesignMatrix x;
  std::size_t added = 0;
  std::size_t dropped = 0;
  std::vector<std::string> notes;
};
AugmentedDesign augment_with_basis(const Dataset& d, const PropensityScores& ps,
                                   const BasisSpec& basis);

// Dispatch on config. `ps` may be null only for estimators that do not
// need propensities.
EstimatorResult estimate(const Dataset& d, const PropensityScores* ps,
                         const EstimatorConfig& config);

}  // namespace drm
