#include "drmean/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "drmean/error.hpp"
#include "drmean/least_squares.hpp"

namespace drm {
namespace {

// log(1 + exp(eta)) without overflow.
double softplus(double eta) noexcept {
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double expit(double eta) noexcept {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

double logit(double p) noexcept { return std::log(p / (1.0 - p)); }

double bernoulli_deviance(std::span<const double> eta, std::span<const std::uint8_t> t) {
  double dev = 0.0;
  for (std::size_t i = 0; i < eta.size(); ++i) dev += softplus(eta[i]) - (t[i] ? eta[i] : 0.0);
  return 2.0 * dev;
}

LogisticFit fit_logistic(const DesignMatrix& x, std::span<const std::uint8_t> t,
                         const LogisticOptions& options) {
  const std::size_t n = x.rows();
  if (t.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "design has " + std::to_string(n) +
                                                  " rows, response has " +
                                                  std::to_string(t.size()));
  }
  std::size_t ones = 0;
  for (auto v : t) {
    if (v > 1) throw Error(ErrorCode::InvalidArgument, "response must be 0/1");
    ones += v;
  }
  if (ones == 0 || ones == n) {
    throw Error(ErrorCode::DegenerateResponse,
                "all " + std::to_string(n) + " responses equal " + (ones == 0 ? "0" : "1"));
  }

  std::vector<double> alpha(x.cols(), 0.0);
  if (x.has_intercept()) alpha[0] = logit(static_cast<double>(ones) / static_cast<double>(n));

  std::vector<double> eta = x.multiply(alpha);
  double deviance = bernoulli_deviance(eta, t);
  std::vector<double> weights(n), working(n);

  LogisticFit fit;
  bool converged = false;
  bool decreasing = true;
  int iter = 0;
  // One IRLS update: weighted least squares on the working response.
  auto newton_step = [&]() {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = expit(eta[i]);
      // The floor only shapes the Newton path; fixed points still solve
      // X^T (t - p) = 0.
      const double w = std::max(p * (1.0 - p), 1e-12);
      weights[i] = w;
      working[i] = eta[i] + (static_cast<double>(t[i]) - p) / w;
    }
    return solve_least_squares(x, working, weights).coefficients;
  };

  while (iter < options.max_iterations) {
    ++iter;
    std::vector<double> proposal = newton_step();
    std::vector<double> next_eta = x.multiply(proposal);
    double next_dev = bernoulli_deviance(next_eta, t);

    for (int h = 0; h < options.max_halvings && !(next_dev <= deviance); ++h) {
      for (std::size_t j = 0; j < alpha.size(); ++j) proposal[j] = 0.5 * (proposal[j] + alpha[j]);
      next_eta = x.multiply(proposal);
      next_dev = bernoulli_deviance(next_eta, t);
    }
    if (!std::isfinite(next_dev)) {
      throw Error(ErrorCode::SeparationSuspected, "deviance became non-finite");
    }

    const double change = std::abs(next_dev - deviance) / (std::abs(next_dev) + 0.1);
    decreasing = next_dev < deviance;
    alpha = std::move(proposal);
    eta = std::move(next_eta);
    deviance = next_dev;
    if (change < options.tolerance) {
      converged = true;
      break;
    }
  }

  // The deviance test stops while coefficients can still move by ~1e-8; a
  // final Newton step from inside the quadratic region removes that slack.
  if (converged && max_abs(alpha) <= options.divergence_bound) {
    std::vector<double> polished = newton_step();
    std::vector<double> polished_eta = x.multiply(polished);
    const double polished_dev = bernoulli_deviance(polished_eta, t);
    if (polished_dev <= deviance + 1e-12 * std::abs(deviance)) {
      alpha = std::move(polished);
      eta = std::move(polished_eta);
      deviance = polished_dev;
    }
  }

  const double largest = max_abs(alpha);
  if (largest > options.divergence_bound && (!converged || decreasing)) {
    throw Error(ErrorCode::SeparationSuspected,
                "max |coefficient| = " + std::to_string(largest) + " after " +
                    std::to_string(iter) + " iterations");
  }

  fit.coefficients = std::move(alpha);
  fit.probabilities.resize(n);
  for (std::size_t i = 0; i < n; ++i) fit.probabilities[i] = expit(eta[i]);
  fit.linear_predictors = std::move(eta);
  fit.converged = converged;
  fit.iterations = iter;
  fit.deviance = deviance;
  return fit;
}

}  // namespace drm
