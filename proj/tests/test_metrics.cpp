#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "drmean/error.hpp"
#include "drmean/metrics.hpp"
#include "drmean/simulation.hpp"

namespace {

using namespace drm;

// Values with exactly the requested mean offset and sample sd.
std::vector<double> synthetic(std::size_t r, double mu, double bias, double sd,
                              std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<double> u(r);
  double m = 0;
  for (auto& v : u) m += (v = nd(gen)) / r;
  double ss = 0;
  for (auto& v : u) ss += (v - m) * (v - m);
  const double scale = sd / std::sqrt(ss / (r - 1));
  for (auto& v : u) v = mu + bias + (v - m) * scale;
  return u;
}

TEST(Metrics, PerfectEstimator) {
  const std::vector<double> est(10, 4.0);
  const auto m = compute_metrics(est, 4.0);
  EXPECT_EQ(m.bias, 0.0);
  EXPECT_EQ(m.rmse, 0.0);
  EXPECT_EQ(m.mae, 0.0);
  EXPECT_EQ(*m.var, 0.0);
  EXPECT_EQ(m.mse, 0.0);
}

TEST(Metrics, HandArithmetic) {
  const auto m = compute_metrics(std::vector<double>{1, 2, 3, 6}, 2.0);
  EXPECT_EQ(m.reps, 4u);
  EXPECT_DOUBLE_EQ(m.bias, 1.0);
  EXPECT_DOUBLE_EQ(*m.var, 14.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.mse, 4.5);
  EXPECT_DOUBLE_EQ(m.rmse, std::sqrt(4.5));
  EXPECT_DOUBLE_EQ(m.mae, 1.0);
  EXPECT_DOUBLE_EQ(*m.pct_bias, 100.0 / std::sqrt(14.0 / 3.0));
  const auto mean_abs = compute_metrics(std::vector<double>{1, 2, 3, 6}, 2.0, AbsErrorSummary::Mean);
  EXPECT_DOUBLE_EQ(mean_abs.mae, 1.5);
}

TEST(Metrics, SingleReplicateHasNoSpread) {
  const auto m = compute_metrics(std::vector<double>{3.0}, 2.0);
  EXPECT_FALSE(m.var.has_value());
  EXPECT_FALSE(m.pct_bias.has_value());
  EXPECT_DOUBLE_EQ(m.mse, 1.0);
  EXPECT_THROW(compute_metrics(std::vector<double>{}, 0.0), Error);
}

TEST(Metrics, MseFromReportedBiasAndVariance) {
  const auto est = synthetic(1000, 0.0, 2.21, std::sqrt(12.61), 1);
  const auto m = compute_metrics(est, 0.0);
  EXPECT_NEAR(m.bias, 2.21, 1e-12);
  EXPECT_NEAR(*m.var, 12.61, 1e-10);
  EXPECT_NEAR(m.mse, 12.61 * 999 / 1000 + 2.21 * 2.21, 1e-10);
  EXPECT_NEAR(m.mse, 17.46, 0.05);
}

TEST(Metrics, PercentBiasFromReportedRow) {
  const double sd = std::sqrt(1.27 * 1.27 - 0.30 * 0.30);
  EXPECT_NEAR(sd, 1.234, 1e-3);
  const auto m = compute_metrics(synthetic(1000, 5.0, 0.30, sd, 2), 5.0);
  EXPECT_NEAR(*m.pct_bias, 24.3, 0.05);
  EXPECT_NEAR(*m.pct_bias, 24.6, 0.5);
}

TEST(MetricsProperty, IdentityAndPermutationInvariance) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> est(2 + trial * 7);
    for (auto& v : est) v = 100 + 3 * nd(gen);
    const auto m = compute_metrics(est, 101.0);
    const double r = static_cast<double>(est.size());
    EXPECT_NEAR(m.mse, (r - 1) / r * *m.var + m.bias * m.bias, 1e-12 * std::max(1.0, m.mse));
    std::shuffle(est.begin(), est.end(), gen);
    const auto p = compute_metrics(est, 101.0);
    EXPECT_EQ(std::memcmp(&m.bias, &p.bias, sizeof(double)), 0);
    EXPECT_EQ(std::memcmp(&m.mse, &p.mse, sizeof(double)), 0);
    EXPECT_EQ(std::memcmp(&*m.var, &*p.var, sizeof(double)), 0);
    EXPECT_EQ(m.mae, p.mae);
  }
}

// ------------------------------------------------------------- simulation

ScenarioSpec line_spec() {
  ScenarioSpec s;
  s.name = "line";
  s.latent_dim = 1;
  s.outcome_intercept = 1.0;
  s.outcome_coefs = {2.0};
  s.propensity_coefs = {-0.8};
  s.transforms = {Expression::parse("exp(z1/2)")};
  return s;
}

RunConfig small_run() {
  RunConfig c;
  c.scenario = line_spec();
  c.n = 120;
  c.reps = 40;
  c.seed = 77;
  for (const char* e : {"naive_mean", "mu_ols", "mu_bc_ols", "mu_pi_cov"}) {
    c.estimators.push_back(parse_estimator(e));
  }
  c.spec_grid = {GridCell::BothCorrect, GridCell::BothWrong};
  return c;
}

TEST(Simulation, SingleReplicateAllRespond) {
  RunConfig c;
  c.scenario = line_spec();
  c.scenario.propensity_intercept = 20;
  c.scenario.propensity_coefs = {0.0};
  c.n = 50;
  c.reps = 1;
  c.estimators = {parse_estimator("naive_mean")};
  const auto res = run_simulation(c);
  ASSERT_EQ(res.estimates.size(), 1u);
  const auto s = generate_sample(c.scenario, 50, c.seed, 0);
  double m = 0;
  for (double y : s.y_full) m += y / 50;
  EXPECT_NEAR(res.estimate(0, 0, 0), m, 1e-12);
}

TEST(Simulation, DeterministicAcrossRunsAndThreads) {
  auto c = small_run();
  const auto a = run_simulation(c);
  const auto b = run_simulation(c);
  c.threads = 3;
  const auto d = run_simulation(c);
  ASSERT_EQ(a.estimates.size(), 40u * 2 * 4);
  EXPECT_EQ(0, std::memcmp(a.estimates.data(), b.estimates.data(), a.estimates.size() * 8));
  EXPECT_EQ(0, std::memcmp(a.estimates.data(), d.estimates.data(), a.estimates.size() * 8));
  EXPECT_EQ(a.failures.size(), d.failures.size());
}

TEST(Simulation, SummaryRowsAndFailures) {
  auto c = small_run();
  c.n = 6;  // small samples make some regression fits fail
  c.reps = 30;
  const auto res = run_simulation(c);
  const auto rows = summarise(res);
  std::size_t total_excluded = 0;
  for (const auto& row : rows) {
    total_excluded += row.excluded;
    EXPECT_EQ(row.metrics.reps + row.excluded, 30u);
  }
  EXPECT_EQ(total_excluded, res.failures.size());
  for (std::size_t k = 1; k < res.failures.size(); ++k) {
    EXPECT_LE(res.failures[k - 1].rep, res.failures[k].rep);
  }
}

TEST(Simulation, CorrectModelOlsIsUnbiased) {
  RunConfig c;
  c.scenario = line_spec();
  c.n = 500;
  c.reps = 500;
  c.estimators = {parse_estimator("mu_ols")};
  c.spec_grid = {GridCell::YCorrectOnly};
  const auto res = run_simulation(c);
  const auto rows = summarise(res);
  ASSERT_EQ(rows.size(), 1u);
  const auto& m = rows[0].metrics;
  EXPECT_LT(std::abs(m.bias), 3 * std::sqrt(*m.var) / std::sqrt(500.0));
}

TEST(GridCell, Names) {
  for (auto g : {GridCell::BothCorrect, GridCell::YCorrectOnly, GridCell::PiCorrectOnly,
                 GridCell::BothWrong}) {
    EXPECT_EQ(parse_grid_cell(to_string(g)), g);
  }
  EXPECT_TRUE(y_model_correct(GridCell::YCorrectOnly));
  EXPECT_FALSE(pi_model_correct(GridCell::YCorrectOnly));
  EXPECT_THROW(parse_grid_cell("neither"), Error);
}

}  // namespace
