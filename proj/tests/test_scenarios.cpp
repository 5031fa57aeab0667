#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "drmean/error.hpp"
#include "drmean/least_squares.hpp"
#include "drmean/scenario.hpp"
#include "drmean/scenario_io.hpp"
#include "test_support.hpp"

namespace {

using namespace drm;
namespace tst = drm::testing;

ScenarioSpec identity_spec(std::size_t d) {
  ScenarioSpec s;
  s.name = "identity";
  s.latent_dim = d;
  s.outcome_intercept = 2.0;
  s.outcome_coefs.assign(d, 0.0);
  s.outcome_coefs[0] = 3.0;
  s.propensity_coefs.assign(d, 0.0);
  s.propensity_coefs[0] = 0.7;
  for (std::size_t k = 1; k <= d; ++k) s.transforms.push_back(Expression::parse("z" + std::to_string(k)));
  return s;
}

ScenarioSpec classic_spec() {
  return load_scenario(std::filesystem::path(DRMEAN_SOURCE_DIR) / "config" / "classic_benchmark.json");
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

TEST(GenerateSample, Deterministic) {
  const auto spec = classic_spec();
  const auto a = generate_sample(spec, 500, 99, 3);
  const auto b = generate_sample(spec, 500, 99, 3);
  EXPECT_TRUE(bitwise_equal(a.y_full, b.y_full));
  EXPECT_TRUE(bitwise_equal(a.pi_true, b.pi_true));
  EXPECT_EQ(a.dataset.t, b.dataset.t);
  EXPECT_EQ(0, std::memcmp(a.dataset.x.values().data(), b.dataset.x.values().data(),
                           a.dataset.x.values().size() * sizeof(double)));
  const auto c = generate_sample(spec, 500, 99, 4);
  EXPECT_FALSE(bitwise_equal(a.y_full, c.y_full));
  const auto e = generate_sample(spec, 500, 100, 3);
  EXPECT_FALSE(bitwise_equal(a.y_full, e.y_full));
}

TEST(GenerateSample, PrefixStableAcrossSampleSizes) {
  const auto spec = classic_spec();
  const auto small = generate_sample(spec, 50, 5);
  const auto large = generate_sample(spec, 80, 5);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(small.y_full[i], large.y_full[i]);
}

TEST(GenerateSample, ObservedOutcomesOnlyForRespondents) {
  const auto s = generate_sample(classic_spec(), 400, 1);
  for (std::size_t i = 0; i < 400; ++i) {
    if (s.dataset.t[i]) {
      EXPECT_EQ(s.dataset.y[i], s.y_full[i]);
    } else {
      EXPECT_TRUE(std::isnan(s.dataset.y[i]));
    }
    EXPECT_GT(s.pi_true[i], 0.0);
    EXPECT_LT(s.pi_true[i], 1.0);
  }
  EXPECT_NO_THROW(s.dataset.validate());
  EXPECT_TRUE(s.dataset.x.has_intercept());
  EXPECT_EQ(s.dataset.x.cols(), 5u);
  EXPECT_EQ(s.mu_true, 210.0);
}

TEST(GenerateSample, TransformsAreApplied) {
  const auto spec = classic_spec();
  const auto s = generate_sample(spec, 20, 8);
  for (std::size_t i = 0; i < 20; ++i) {
    const double z1 = s.latent(i, 1), z2 = s.latent(i, 2), z3 = s.latent(i, 3),
                 z4 = s.latent(i, 4);
    EXPECT_NEAR(s.dataset.x(i, 1), std::exp(z1 / 2), 1e-12);
    EXPECT_NEAR(s.dataset.x(i, 4), std::pow(z2 + z4 + 20, 2), 1e-9);
    EXPECT_NEAR(s.y_lp_true[i], 210 + 27.4 * z1 + 13.7 * (z2 + z3 + z4), 1e-9);
  }
}

TEST(GenerateSample, NoSignalOutcome) {
  ScenarioSpec spec = identity_spec(2);
  spec.outcome_coefs = {0, 0};
  spec.outcome_intercept = 5.0;
  spec.noise_sd = 2.0;
  const auto s = generate_sample(spec, 20000, 3);
  double m = 0, v = 0;
  for (double y : s.y_full) m += y / 20000;
  for (double y : s.y_full) v += (y - m) * (y - m) / 19999;
  EXPECT_EQ(s.mu_true, 5.0);
  EXPECT_NEAR(m, 5.0, 4 * 2.0 / std::sqrt(20000.0));
  EXPECT_NEAR(v, 4.0, 0.2);
}

TEST(GenerateSample, FairCoinResponse) {
  ScenarioSpec spec = identity_spec(2);
  spec.propensity_coefs = {0, 0};
  const auto s = generate_sample(spec, 10000, 11);
  double rate = 0;
  for (auto t : s.dataset.t) rate += t / 10000.0;
  EXPECT_NEAR(rate, 0.5, 4 / std::sqrt(10000.0));
}

TEST(GenerateSample, LargeSampleOlsRecoversCoefficients) {
  const auto spec = identity_spec(1);
  const std::size_t n = 100000;
  const auto s = generate_sample(spec, n, 13);
  const auto fit = solve_least_squares(s.dataset.x, s.y_full);
  // Standard errors for a unit-variance regressor and unit noise.
  EXPECT_NEAR(fit.coefficients[0], 2.0, 3 / std::sqrt(double(n)));
  EXPECT_NEAR(fit.coefficients[1], 3.0, 3 / std::sqrt(double(n)));
}

TEST(GenerateSample, AnalyticMeanCrossCheck) {
  ScenarioSpec spec = identity_spec(2);
  spec.outcome_intercept = 210;
  spec.outcome_coefs = {0.6, 0.8};  // total sd sqrt(1 + 1) with unit noise
  EXPECT_EQ(analytic_true_mean(spec), 210.0);
  spec.outcome_intercept = 0;
  EXPECT_EQ(analytic_true_mean(spec), 0.0);
  spec.outcome_intercept = 210;
  const std::size_t n = 1000000;
  const auto s = generate_sample(spec, n, 17);
  double m = 0;
  for (double y : s.y_full) m += y;
  m /= n;
  EXPECT_NEAR(m, 210.0, 4 * std::sqrt(2.0) / 1000);
}

TEST(GenerateSample, ReverseRolesFlipsResponse) {
  ScenarioSpec spec = classic_spec();
  const auto a = generate_sample(spec, 300, 21);
  spec.reverse_roles = true;
  const auto b = generate_sample(spec, 300, 21);
  for (std::size_t i = 0; i < 300; ++i) {
    EXPECT_EQ(b.dataset.t[i], 1 - a.dataset.t[i]);
    EXPECT_EQ(1 - b.dataset.t[i], a.dataset.t[i]);  // twice is the identity
    EXPECT_NEAR(b.pi_true[i], 1 - a.pi_true[i], 1e-15);
    EXPECT_EQ(b.y_full[i], a.y_full[i]);
  }
}

TEST(GenerateSample, IgnorabilityByConstruction) {
  const auto spec = classic_spec();
  const std::size_t n = 100000;
  const auto s = generate_sample(spec, n, 23);
  std::vector<double> tcol(n);
  for (std::size_t i = 0; i < n; ++i) tcol[i] = s.dataset.t[i];
  DesignMatrix x = s.latent;
  x.append_column(tcol);
  const auto fit = solve_least_squares(x, s.y_full);
  double rss = 0;
  for (double r : fit.residuals) rss += r * r;
  const double sigma2 = rss / (n - x.cols());
  // Standard error of the t coefficient from (X'X)^{-1} via the oracle solver.
  tst::Rows xtx(x.cols(), std::vector<double>(x.cols(), 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      for (std::size_t k = 0; k < x.cols(); ++k) xtx[j][k] += x(i, j) * x(i, k);
    }
  }
  std::vector<double> unit(x.cols(), 0.0);
  unit.back() = 1.0;
  const double var_t = sigma2 * tst::gauss_solve(xtx, unit).back();
  EXPECT_LT(std::abs(fit.coefficients.back()), 3 * std::sqrt(var_t));
}

TEST(AlternativeX4, ReplacesFourthTransform) {
  ScenarioSpec spec = classic_spec();
  apply_alternative_x4(spec);
  EXPECT_EQ(spec.transforms[3].source(), "(z3+z4+20)^2");
  EXPECT_EQ(spec.transforms[3].evaluate(std::vector<double>{0, 0, 0, 0}), 400.0);
  EXPECT_EQ(spec.name, "classic_benchmark+alt_x4");
}

TEST(ValidateScenario, IdentityAndNoiseless) {
  // With one latent variable every fitted linear predictor is an affine
  // function of z1, so both correlations with the truth are exactly 1.
  auto r = validate_scenario(identity_spec(1), 5000, 2);
  EXPECT_NEAR(r.corr_true_y, 1.0, 1e-12);
  EXPECT_NEAR(r.corr_true_pi, 1.0, 1e-12);
  EXPECT_NEAR(std::abs(r.corr_lp), 1.0, 1e-12);

  ScenarioSpec spec = identity_spec(2);
  spec.outcome_coefs = {1.0, -0.5};
  spec.propensity_coefs = {0.4, 0.9};
  spec.noise_sd = 0.0;
  r = validate_scenario(spec, 5000, 2);
  for (const auto& m : r.monotone_check) EXPECT_TRUE(m.consistent);
  EXPECT_NEAR(r.r2_y_on_x, 1.0, 1e-12);
  EXPECT_NEAR(r.corr_true_y, 1.0, 1e-12);
  EXPECT_EQ(r.quantile_probs, (std::vector<double>{0.01, 0.25, 0.5, 0.75, 0.99}));
  EXPECT_THROW(validate_scenario(spec, 999, 2), Error);
}

TEST(ValidateScenario, NonMonotoneTransformIsFlagged) {
  ScenarioSpec spec = identity_spec(2);
  spec.transforms = {Expression::parse("z1^2"), Expression::parse("z2")};
  const auto r = validate_scenario(spec, 2000, 1);
  ASSERT_EQ(r.monotone_check.size(), 2u);
  EXPECT_FALSE(r.monotone_check[0].consistent);
  EXPECT_EQ(r.monotone_check[0].suspect_axes, std::vector<std::size_t>{1});
  EXPECT_TRUE(r.monotone_check[1].consistent);
}

TEST(ScenarioIo, RoundTripAndPlaceholders) {
  const auto spec = classic_spec();
  const auto again = parse_scenario(scenario_to_json(spec));
  EXPECT_EQ(again.name, spec.name);
  EXPECT_EQ(again.outcome_coefs, spec.outcome_coefs);
  EXPECT_EQ(again.propensity_coefs, spec.propensity_coefs);
  ASSERT_EQ(again.transforms.size(), spec.transforms.size());
  for (std::size_t j = 0; j < spec.transforms.size(); ++j) {
    EXPECT_EQ(again.transforms[j].to_string(), spec.transforms[j].to_string());
  }

  try {
    load_scenario(std::filesystem::path(DRMEAN_SOURCE_DIR) / "config" /
                  "classic_benchmark.template.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    EXPECT_NE(std::string(e.what()).find("placeholder"), std::string::npos);
  }
}

TEST(ScenarioIo, TanVariantAndErrors) {
  const auto alt = load_scenario(std::filesystem::path(DRMEAN_SOURCE_DIR) / "config" /
                                 "classic_benchmark_alt_x4.json");
  EXPECT_EQ(alt.transforms[3].source(), "(z3+z4+20)^2");
  EXPECT_THROW(parse_scenario("{"), Error);
  EXPECT_THROW(parse_scenario(R"({"name":"x","latent_dim":1,
      "outcome":{"intercept":0,"coefficients":[1],"noise_sd":1},
      "propensity":{"intercept":0,"coefficients":[1]},
      "transforms":["z2"]})"),
               Error);
}

}  // namespace
