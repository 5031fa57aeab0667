#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "drmean/matrix.hpp"

namespace drm {

struct LogisticFit {
  std::vector<double> coefficients;
  std::vector<double> linear_predictors;
  std::vector<double> probabilities;
  bool converged = false;
  int iterations = 0;
  double deviance = 0.0;
};

struct LogisticOptions {
  double tolerance = 1e-8;       // on |delta deviance| / (|deviance| + 0.1)
  int max_iterations = 50;
  int max_halvings = 10;
  double divergence_bound = 30;  // max |coefficient| treated as separation
};

double expit(double eta) noexcept;
double logit(double p) noexcept;

// Bernoulli deviance -2 log L for linear predictors eta and 0/1 outcomes t.
double bernoulli_deviance(std::span<const double> eta, std::span<const std::uint8_t> t);

// Maximum-likelihood logistic regression of t on x by iteratively reweighted
// least squares with step halving.
LogisticFit fit_logistic(const DesignMatrix& x, std::span<const std::uint8_t> t,
                         const LogisticOptions& options = {});

}  // namespace drm
