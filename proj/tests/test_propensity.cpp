#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "drmean/error.hpp"
#include "drmean/propensity.hpp"

namespace {

using drm::ErrorCode;

TEST(PropensityScores, NoClippingInsideTheBand) {
  const std::vector<double> p{0.2, 0.5, 0.9};
  const auto ps = drm::make_propensity_scores(p);
  EXPECT_EQ(ps.pi_hat, p);
  EXPECT_EQ(ps.clipped_count, 0u);
  EXPECT_NEAR(ps.eta_hat[0], std::log(0.2 / 0.8), 1e-15);
  EXPECT_EQ(ps.eta_hat[1], 0.0);
  EXPECT_NEAR(ps.eta_hat[2], std::log(0.9 / 0.1), 1e-14);
}

TEST(PropensityScores, ClipsAtEpsilon) {
  const std::vector<double> p{1e-9, 1.0};
  const auto ps = drm::make_propensity_scores(p, 1e-6);
  EXPECT_EQ(ps.pi_hat[0], 1e-6);
  EXPECT_EQ(ps.pi_hat[1], 1.0 - 1e-6);
  EXPECT_EQ(ps.clipped_count, 2u);
  EXPECT_TRUE(std::isfinite(ps.eta_hat[1]));
}

TEST(PropensityScores, LogitOfPointEight) {
  const auto ps = drm::make_propensity_scores(std::vector<double>{0.8});
  EXPECT_NEAR(ps.eta_hat[0], 1.386294, 1e-6);
}

TEST(PropensityScores, IdempotentAndValidated) {
  const std::vector<double> p{0.0, 0.3, 0.999999999};
  const auto once = drm::make_propensity_scores(p, 1e-4);
  const auto twice = drm::make_propensity_scores(once.pi_hat, 1e-4);
  EXPECT_EQ(once.pi_hat, twice.pi_hat);
  EXPECT_EQ(once.eta_hat, twice.eta_hat);
  EXPECT_EQ(twice.clipped_count, 0u);

  try {
    drm::make_propensity_scores(p, 0.5);
    FAIL();
  } catch (const drm::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EpsilonOutOfRange);
  }
  try {
    drm::make_propensity_scores(std::vector<double>{1.2});
    FAIL();
  } catch (const drm::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ProbOutOfRange);
  }
}

TEST(SplineBasis, HandEvaluation) {
  const std::vector<double> knots{-1, 0, 1, 2};
  const std::vector<double> eta{3.0, -1.0, -5.0, 0.5};
  const auto b = drm::make_spline_basis(eta, knots);
  ASSERT_EQ(b.cols(), 4u);
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_EQ(b(0, j), 4.0 - j);
    EXPECT_EQ(b(1, j), 0.0);  // at the first knot
    EXPECT_EQ(b(2, j), 0.0);  // below every knot
  }
  EXPECT_EQ(b(3, 0), 1.5);
  EXPECT_EQ(b(3, 1), 0.5);
  EXPECT_EQ(b(3, 2), 0.0);
}

TEST(SplineBasis, KnotsMustIncrease) {
  const std::vector<double> knots{0, 0};
  try {
    drm::make_spline_basis(std::vector<double>{1.0}, knots);
    FAIL();
  } catch (const drm::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::KnotsNotIncreasing);
  }
}

TEST(SplineBasisProperty, MonotoneNestedContinuous) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd(0, 2);
  std::vector<double> eta(400);
  for (auto& v : eta) v = nd(gen);
  const auto knots = drm::quantile_knots(eta);
  ASSERT_EQ(knots.size(), 4u);
  std::vector<double> sorted = eta;
  std::sort(sorted.begin(), sorted.end());
  const auto b = drm::make_spline_basis(sorted, knots);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i > 0) {
        EXPECT_GE(b(i, j), b(i - 1, j));
      }
      if (j + 1 < 4) {
        EXPECT_GE(b(i, j), b(i, j + 1));
      }
      // Lipschitz with constant 1, hence continuous.
      if (i > 0) {
        EXPECT_LE(b(i, j) - b(i - 1, j), sorted[i] - sorted[i - 1] + 1e-15);
      }
    }
  }
}

TEST(QuantileKnots, QuintilesAndTies) {
  std::vector<double> eta{1, 2, 3, 4, 5, 6};
  const auto k = drm::quantile_knots(eta);
  const std::vector<double> expect{2, 3, 4, 5};
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(k[j], expect[j], 1e-14);
  const auto tied = drm::quantile_knots(std::vector<double>{2, 2, 2, 2, 2});
  EXPECT_EQ(tied, std::vector<double>{2});
}

TEST(IndicatorBasis, TwoUnitsPerBin) {
  std::vector<double> pi;
  for (int i = 1; i <= 10; ++i) pi.push_back(0.1 * i);
  const auto b = drm::make_quintile_indicator_basis(pi, 5);
  EXPECT_EQ(b.bins, 5u);
  EXPECT_FALSE(b.merged);
  ASSERT_EQ(b.columns.cols(), 4u);
  std::vector<int> counts(5, 0);
  for (std::size_t i = 0; i < pi.size(); ++i) {
    int which = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      if (b.columns(i, j) == 1.0) which = static_cast<int>(j) + 1;
    }
    ++counts[which];
  }
  for (int c : counts) EXPECT_EQ(c, 2);
}

TEST(IndicatorBasis, EqualPropensitiesMergeToNothing) {
  const std::vector<double> pi(8, 0.4);
  const auto b = drm::make_quintile_indicator_basis(pi, 5);
  EXPECT_TRUE(b.merged);
  EXPECT_EQ(b.bins, 1u);
  EXPECT_EQ(b.columns.cols(), 0u);
}

TEST(IndicatorBasis, TwoPointSplit) {
  const auto b = drm::make_quintile_indicator_basis(std::vector<double>{0.1, 0.9}, 2);
  ASSERT_EQ(b.columns.cols(), 1u);
  EXPECT_EQ(b.columns(0, 0), 0.0);
  EXPECT_EQ(b.columns(1, 0), 1.0);
}

TEST(IndicatorBasis, TooFewUnits) {
  try {
    drm::make_quintile_indicator_basis(std::vector<double>{0.1, 0.9}, 5);
    FAIL();
  } catch (const drm::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewUnits);
  }
}

TEST(IndicatorBasisProperty, RowsSumToAtMostOne) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> ud(0, 1);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> pi(10 + trial);
    for (auto& v : pi) v = std::round(ud(gen) * 8) / 8;  // plenty of ties
    const auto b = drm::make_quintile_indicator_basis(pi, 5);
    // The smallest propensity always falls in bin 0, so bin 0 is the reference.
    const double ref_cut = b.cuts.front();
    for (std::size_t i = 0; i < pi.size(); ++i) {
      double s = 0;
      for (std::size_t j = 0; j < b.columns.cols(); ++j) s += b.columns(i, j);
      EXPECT_EQ(s, pi[i] > ref_cut ? 1.0 : 0.0);
    }
  }
}

TEST(SquaredBasis, Values) {
  const auto b = drm::make_squared_lp_basis(std::vector<double>{0, -2, 1.5});
  EXPECT_EQ(b(0, 0), 0.0);
  EXPECT_EQ(b(1, 0), 4.0);
  EXPECT_EQ(b(2, 0), 2.25);
}

TEST(BasisKind, Names) {
  for (auto k : {drm::BasisKind::SplineLogit, drm::BasisKind::QuintileIndicators,
                 drm::BasisKind::SquaredLp}) {
    EXPECT_EQ(drm::parse_basis_kind(drm::to_string(k)), k);
  }
  EXPECT_THROW(drm::parse_basis_kind("cubic"), drm::Error);
}

}  // namespace
