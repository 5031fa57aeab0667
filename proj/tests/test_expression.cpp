#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "drmean/error.hpp"
#include "drmean/expression.hpp"
#include "test_support.hpp"

namespace {

using drm::Expression;

double eval(const std::string& text, std::vector<double> z = {0, 0, 0, 0, 0}) {
  return Expression::parse(text).evaluate(z);
}

TEST(Expression, Examples) {
  EXPECT_EQ(eval("(z3+z4+20)^2"), 400.0);
  EXPECT_EQ(eval("2+3*4"), 14.0);
  EXPECT_EQ(eval("exp(z1/2)"), 1.0);
  EXPECT_EQ(eval("-z1^2", {2}), -4.0);
  EXPECT_EQ(eval("z1*z2/4", {2, 6}), 3.0);
  EXPECT_NEAR(eval("(z1*z2/25+0.6)^3", {5, 5}), 4.096, 1e-12);
}

TEST(Expression, PrecedenceAndAssociativity) {
  EXPECT_EQ(eval("10-4-3"), 3.0);
  EXPECT_EQ(eval("64/4/2"), 8.0);
  EXPECT_EQ(eval("2^3^2"), 512.0);
  EXPECT_EQ(eval("(2^3)^2"), 64.0);
  EXPECT_EQ(eval("2*3^2"), 18.0);
  EXPECT_EQ(eval("-2^2"), -4.0);
  EXPECT_EQ(eval("(-2)^2"), 4.0);
  EXPECT_EQ(eval("2^-1"), 0.5);
  EXPECT_EQ(eval("--3"), 3.0);
  EXPECT_EQ(eval("1 - -1"), 2.0);
  EXPECT_EQ(eval("  1 +\t2 * ( 3 + 1 ) "), 9.0);
  EXPECT_EQ(eval("6/2*3"), 9.0);
  EXPECT_EQ(eval("1.5e2 + .5"), 150.5);
}

TEST(Expression, MaxVariableAndBind) {
  const auto e = Expression::parse("z1 + z12 * z3");
  EXPECT_EQ(e.max_variable(), 12u);
  EXPECT_NO_THROW(e.bind(12));
  try {
    e.bind(4);
    FAIL();
  } catch (const drm::Error& err) {
    EXPECT_EQ(err.code(), drm::ErrorCode::UnknownVariable);
  }
  EXPECT_EQ(Expression::parse("3").max_variable(), 0u);
}

TEST(Expression, SyntaxErrorsCarryPositions) {
  const struct {
    const char* text;
    std::size_t position;
  } cases[] = {{"z1+", 3}, {"", 0}, {"(z1", 3}, {"2*)", 2}, {"z", 0}, {"z0", 0}, {"1 2", 2},
               {"exp z1", 4}};
  for (const auto& c : cases) {
    try {
      Expression::parse(c.text);
      ADD_FAILURE() << "accepted '" << c.text << "'";
    } catch (const drm::ParseError& e) {
      EXPECT_EQ(e.code(), drm::ErrorCode::SyntaxError);
      EXPECT_EQ(e.position(), c.position) << c.text;
    }
  }
}

TEST(Expression, EvaluationErrors) {
  const std::vector<double> z{1.0};
  try {
    Expression::parse("1/(z1-1)").evaluate(z);
    FAIL();
  } catch (const drm::Error& e) {
    EXPECT_EQ(e.code(), drm::ErrorCode::EvaluationError);
  }
  EXPECT_THROW(Expression::parse("exp(1000)").evaluate(z), drm::Error);
  EXPECT_THROW(Expression::parse("z2").evaluate(z), drm::Error);
}

TEST(Expression, CanonicalForm) {
  EXPECT_EQ(Expression::parse("(z3+z4+20)^2").to_string(), "((z3 + z4) + 20) ^ 2");
  EXPECT_EQ(Expression::parse(" z1 ").source(), " z1 ");
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

TEST(ExpressionFuzz, ParseMatchesConstructionAndRoundTrips) {
  drm::testing::ExpressionFuzzer fuzz(2024);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto z = fuzz.point(4);
    const auto g = fuzz.make(z, 4);
    if (!std::isfinite(g.value) || std::abs(g.value) > 1e100) continue;
    const auto e = Expression::parse(g.text);
    const double v = e.evaluate(z);
    EXPECT_TRUE(close(v, g.value)) << g.text << " -> " << v << " vs " << g.value;

    const auto again = Expression::parse(e.to_string());
    EXPECT_EQ(again.to_string(), e.to_string());
    for (int k = 0; k < 100; ++k) {
      const auto zz = fuzz.point(4);
      double a = 0, b = 0;
      bool fa = false, fb = false;
      try {
        a = e.evaluate(zz);
      } catch (const drm::Error&) {
        fa = true;
      }
      try {
        b = again.evaluate(zz);
      } catch (const drm::Error&) {
        fb = true;
      }
      ASSERT_EQ(fa, fb) << g.text;
      if (!fa) {
        EXPECT_TRUE(close(a, b)) << g.text;
      }
    }
    ++checked;
  }
  EXPECT_GT(checked, 900);
}

}  // namespace
