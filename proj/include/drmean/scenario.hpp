#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "drmean/dataset.hpp"
#include "drmean/expression.hpp"
#include "drmean/matrix.hpp"

namespace drm {

// Latent z ~ N(0, I_d); y = a + b'z + sigma * e; t ~ Bernoulli(expit(c + g'z)).
// The analyst sees x = (transform_1(z), ..., transform_p(z)) unless
// observe_latent is set.
struct ScenarioSpec {
  std::string name;
  std::size_t latent_dim = 0;
  double outcome_intercept = 0.0;
  std::vector<double> outcome_coefs;
  double noise_sd = 1.0;
  double propensity_intercept = 0.0;
  std::vector<double> propensity_coefs;
  std::vector<Expression> transforms;
  bool observe_latent = false;
  bool reverse_roles = false;
  bool y_model_correct = false;
  bool pi_model_correct = false;

  void validate() const;
};

// Replaces the fourth observed covariate with (z3 + z4 + 20)^2, the
// alternative in which OLS fits respondents almost perfectly but
// extrapolates badly into the low-propensity region.
inline constexpr const char* kAlternativeX4 = "(z3+z4+20)^2";
void apply_alternative_x4(ScenarioSpec& spec);

struct GeneratedSample {
  Dataset dataset;               // observed view, intercept in column 0
  DesignMatrix latent;           // intercept + z, the "correct model" view
  std::vector<double> y_full;    // every outcome, for oracle use only
  std::vector<double> pi_true;   // P(t = 1 | z) after any role reversal
  std::vector<double> eta_true;  // logit of pi_true
  std::vector<double> y_lp_true; // a + b'z
  double mu_true = 0.0;
};

GeneratedSample generate_sample(const ScenarioSpec& spec, std::size_t n, std::uint64_t seed,
                                std::uint64_t replicate = 0);

// E[y] = outcome intercept because E[z] = 0.
double analytic_true_mean(const ScenarioSpec& spec);

struct MonotoneCheck {
  std::string transform;
  bool consistent = true;  // every grid line along every axis was monotone
  std::vector<std::size_t> suspect_axes;  // 1-based latent indices that failed
};

struct ValidationReport {
  std::size_t n = 0;
  double r2_y_on_x = 0.0;
  double corr_lp = 0.0;
  double corr_true_y = 0.0;
  double corr_true_pi = 0.0;
  std::vector<double> quantile_probs;
  std::vector<double> propensity_quantiles;
  std::vector<MonotoneCheck> monotone_check;
};

// Full-data diagnostics of the misspecification design; n >= 1000.
ValidationReport validate_scenario(const ScenarioSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace drm
