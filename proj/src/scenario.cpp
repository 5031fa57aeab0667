#include "drmean/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "drmean/least_squares.hpp"
#include "drmean/logistic.hpp"
#include "drmean/quantile.hpp"
#include "drmean/rng.hpp"
#include "drmean/stats.hpp"

namespace drm {

void ScenarioSpec::validate() const {
  if (latent_dim == 0) throw Error(ErrorCode::ConfigError, "latent dimension must be positive");
  if (outcome_coefs.size() != latent_dim || propensity_coefs.size() != latent_dim) {
    throw Error(ErrorCode::ConfigError,
                "coefficient vectors must have length " + std::to_string(latent_dim));
  }
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
    throw Error(ErrorCode::ConfigError, "noise_sd must be finite and non-negative");
  }
  if (!observe_latent && transforms.empty()) {
    throw Error(ErrorCode::ConfigError, "transforms are required unless observe_latent is set");
  }
  for (const auto& t : transforms) t.bind(latent_dim);
}

void apply_alternative_x4(ScenarioSpec& spec) {
  if (spec.latent_dim < 4 || spec.transforms.size() < 4) {
    throw Error(ErrorCode::ConfigError, "the alternative X4 needs four latent and observed covariates");
  }
  spec.transforms[3] = Expression::parse(kAlternativeX4);
  if (!spec.name.empty()) spec.name += "+alt_x4";
}

double analytic_true_mean(const ScenarioSpec& spec) { return spec.outcome_intercept; }

GeneratedSample generate_sample(const ScenarioSpec& spec, std::size_t n, std::uint64_t seed,
                                std::uint64_t replicate) {
  spec.validate();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be positive");

  const std::size_t d = spec.latent_dim;
  const CounterRng rng(seed);
  GeneratedSample s;
  s.latent = DesignMatrix(n, d + 1, true);
  s.y_full.resize(n);
  s.pi_true.resize(n);
  s.eta_true.resize(n);
  s.y_lp_true.resize(n);
  s.dataset.t.resize(n);
  s.dataset.y.resize(n);

  const std::size_t p = spec.observe_latent ? d : spec.transforms.size();
  s.dataset.x = DesignMatrix(n, p + 1, true);

  std::vector<double> z(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      z[k] = rng.normal({replicate, i, static_cast<std::uint32_t>(k), Stream::Latent});
      s.latent(i, k + 1) = z[k];
    }
    double y_lp = spec.outcome_intercept;
    double eta = spec.propensity_intercept;
    for (std::size_t k = 0; k < d; ++k) {
      y_lp += spec.outcome_coefs[k] * z[k];
      eta += spec.propensity_coefs[k] * z[k];
    }
    const double noise = rng.normal({replicate, i, 0, Stream::Noise});
    const double u = rng.uniform({replicate, i, 0, Stream::Response});
    const double pi = expit(eta);
    std::uint8_t t = u <= pi ? 1 : 0;
    if (spec.reverse_roles) t = static_cast<std::uint8_t>(1 - t);

    s.y_lp_true[i] = y_lp;
    s.y_full[i] = y_lp + spec.noise_sd * noise;
    s.eta_true[i] = spec.reverse_roles ? -eta : eta;
    s.pi_true[i] = spec.reverse_roles ? expit(-eta) : pi;
    s.dataset.t[i] = t;
    s.dataset.y[i] = t ? s.y_full[i] : std::nan("");

    for (std::size_t j = 0; j < p; ++j) {
      if (spec.observe_latent) {
        s.dataset.x(i, j + 1) = z[j];
        continue;
      }
      try {
        s.dataset.x(i, j + 1) = spec.transforms[j].evaluate(z);
      } catch (const Error& e) {
        throw Error(ErrorCode::EvaluationError,
                    "unit " + std::to_string(i) + ", transform " + std::to_string(j + 1) + ": " +
                        e.what());
      }
    }
  }
  s.mu_true = analytic_true_mean(spec);
  return s;
}

namespace {

MonotoneCheck check_transform(const Expression& expr, std::size_t d) {
  constexpr int kSteps = 25;
  constexpr double kReach = 3.0;
  MonotoneCheck out;
  out.transform = expr.source();

  // Base points for the other coordinates: the origin and +-1 on each axis
  // (for small d, every sign pattern in {-1, 0, 1}^d).
  std::vector<std::vector<double>> bases;
  if (d <= 5) {
    std::size_t total = 1;
    for (std::size_t k = 0; k < d; ++k) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<double> b(d);
      std::size_t c = code;
      for (std::size_t k = 0; k < d; ++k, c /= 3) b[k] = static_cast<double>(c % 3) - 1.0;
      bases.push_back(std::move(b));
    }
  } else {
    bases.emplace_back(d, 0.0);
    bases.emplace_back(d, 1.0);
    bases.emplace_back(d, -1.0);
  }

  for (std::size_t axis = 0; axis < d; ++axis) {
    bool suspect = false;
    for (auto base : bases) {
      // Monotone along this line in either direction.
      bool rising = false, falling = false;
      double prev = 0.0;
      for (int s = 0; s <= kSteps; ++s) {
        base[axis] = -kReach + 2.0 * kReach * s / kSteps;
        double v;
        try {
          v = expr.evaluate(base);
        } catch (const Error&) {
          rising = falling = true;
          break;
        }
        if (s > 0) {
          const double diff = v - prev;
          const double tol = 1e-12 * (1.0 + std::abs(v));
          if (diff > tol) rising = true;
          if (diff < -tol) falling = true;
        }
        prev = v;
      }
      if (rising && falling) {
        suspect = true;
        break;
      }
    }
    if (suspect) {
      out.consistent = false;
      out.suspect_axes.push_back(axis + 1);
    }
  }
  return out;
}

}  // namespace

ValidationReport validate_scenario(const ScenarioSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n < 1000) throw Error(ErrorCode::InvalidArgument, "validation needs n >= 1000");
  const GeneratedSample s = generate_sample(spec, n, seed);

  ValidationReport r;
  r.n = n;
  const DesignMatrix& x = s.dataset.x;
  const LinearFit yfit = solve_least_squares(x, s.y_full);
  const double ybar = stats::mean(s.y_full);
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ss_res += yfit.residuals[i] * yfit.residuals[i];
    ss_tot += (s.y_full[i] - ybar) * (s.y_full[i] - ybar);
  }
  r.r2_y_on_x = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 0.0;

  const LogisticFit pfit = fit_logistic(x, s.dataset.t);
  r.corr_lp = stats::correlation(yfit.fitted, pfit.linear_predictors);
  r.corr_true_y = stats::correlation(yfit.fitted, s.y_lp_true);
  r.corr_true_pi = stats::correlation(pfit.linear_predictors, s.eta_true);

  r.quantile_probs = {0.01, 0.25, 0.5, 0.75, 0.99};
  r.propensity_quantiles = quantiles(pfit.probabilities, r.quantile_probs);

  if (!spec.observe_latent) {
    for (const auto& t : spec.transforms) r.monotone_check.push_back(check_transform(t, spec.latent_dim));
  }
  return r;
}

}  // namespace drm
