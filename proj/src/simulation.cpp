#include "drmean/simulation.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "drmean/error.hpp"
#include "drmean/logistic.hpp"

namespace drm {

std::string to_string(GridCell cell) {
  switch (cell) {
    case GridCell::BothCorrect:
      return "both_correct";
    case GridCell::YCorrectOnly:
      return "y_correct_only";
    case GridCell::PiCorrectOnly:
      return "pi_correct_only";
    case GridCell::BothWrong:
      return "both_wrong";
  }
  return "unknown";
}

GridCell parse_grid_cell(const std::string& text) {
  if (text == "both_correct") return GridCell::BothCorrect;
  if (text == "y_correct_only") return GridCell::YCorrectOnly;
  if (text == "pi_correct_only") return GridCell::PiCorrectOnly;
  if (text == "both_wrong") return GridCell::BothWrong;
  throw Error(ErrorCode::ConfigError, "unknown grid cell '" + text + "'");
}

bool y_model_correct(GridCell cell) noexcept {
  return cell == GridCell::BothCorrect || cell == GridCell::YCorrectOnly;
}

bool pi_model_correct(GridCell cell) noexcept {
  return cell == GridCell::BothCorrect || cell == GridCell::PiCorrectOnly;
}

GridCell default_cell(const ScenarioSpec& spec) noexcept {
  if (spec.y_model_correct) return spec.pi_model_correct ? GridCell::BothCorrect : GridCell::YCorrectOnly;
  return spec.pi_model_correct ? GridCell::PiCorrectOnly : GridCell::BothWrong;
}

void RunConfig::validate() const {
  scenario.validate();
  if (reps < 1) throw Error(ErrorCode::ConfigError, "reps must be at least 1");
  if (n < 1) throw Error(ErrorCode::ConfigError, "n must be at least 1");
  if (estimators.empty()) throw Error(ErrorCode::ConfigError, "no estimators configured");
  for (const auto& e : estimators) e.validate();
}

namespace {

struct RepOutput {
  std::vector<ReplicateFailure> failures;
};

void run_replicate(const RunConfig& config, const std::vector<GridCell>& cells, std::size_t rep,
                   double* out, RepOutput& log) {
  const std::size_t n_est = config.estimators.size();
  auto fail_all = [&](std::size_t c, const std::string& why, bool only_propensity) {
    for (std::size_t e = 0; e < n_est; ++e) {
      if (only_propensity && !config.estimators[e].needs_propensity()) continue;
      out[c * n_est + e] = std::nan("");
      log.failures.push_back({rep, cells[c], config.estimators[e].id(), why});
    }
  };

  GeneratedSample sample;
  try {
    sample = generate_sample(config.scenario, config.n, config.seed, rep);
  } catch (const Error& e) {
    for (std::size_t c = 0; c < cells.size(); ++c) fail_all(c, e.what(), false);
    return;
  }

  for (std::size_t c = 0; c < cells.size(); ++c) {
    const GridCell cell = cells[c];
    Dataset data;
    data.x = y_model_correct(cell) ? sample.latent : sample.dataset.x;
    data.t = sample.dataset.t;
    data.y = sample.dataset.y;
    const DesignMatrix& pi_view = pi_model_correct(cell) ? sample.latent : sample.dataset.x;

    LogisticFit pfit;
    bool have_fit = false;
    std::string fit_error;
    bool any_needs = false;
    for (const auto& e : config.estimators) any_needs = any_needs || e.needs_propensity();
    if (any_needs) {
      try {
        pfit = fit_logistic(pi_view, data.t);
        have_fit = true;
      } catch (const Error& e) {
        fit_error = e.what();
      }
    }

    for (std::size_t e = 0; e < n_est; ++e) {
      const EstimatorConfig& est = config.estimators[e];
      double& slot = out[c * n_est + e];
      if (est.needs_propensity() && !have_fit) {
        slot = std::nan("");
        log.failures.push_back({rep, cell, est.id(), "propensity model: " + fit_error});
        continue;
      }
      try {
        PropensityScores ps;
        if (est.needs_propensity()) ps = make_propensity_scores(pfit, est.epsilon);
        const EstimatorResult r = estimate(data, est.needs_propensity() ? &ps : nullptr, est);
        if (!std::isfinite(r.mu_hat)) throw Error(ErrorCode::EvaluationError, "non-finite estimate");
        slot = r.mu_hat;
      } catch (const Error& err) {
        slot = std::nan("");
        log.failures.push_back({rep, cell, est.id(), err.what()});
      }
    }
  }
}

}  // namespace

SimulationResult run_simulation(const RunConfig& config) {
  config.validate();
  SimulationResult result;
  result.cells = config.spec_grid.empty() ? std::vector<GridCell>{default_cell(config.scenario)}
                                          : config.spec_grid;
  for (const auto& e : config.estimators) result.estimator_ids.push_back(e.id());
  result.reps = config.reps;
  result.mu_true = analytic_true_mean(config.scenario);

  const std::size_t stride = result.cells.size() * config.estimators.size();
  result.estimates.assign(config.reps * stride, std::nan(""));
  std::vector<RepOutput> logs(config.reps);

  // Replicates write disjoint slices; the failure logs are merged in rep
  // order afterwards, so scheduling never shows up in the output.
  std::atomic<std::size_t> next{0};
  std::exception_ptr worker_error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t rep = next.fetch_add(1);
      if (rep >= config.reps || failed.load()) return;
      try {
        run_replicate(config, result.cells, rep, result.estimates.data() + rep * stride, logs[rep]);
      } catch (...) {
        if (!failed.exchange(true)) worker_error = std::current_exception();
        return;
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(config.reps)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (worker_error) std::rethrow_exception(worker_error);

  for (auto& log : logs) {
    result.failures.insert(result.failures.end(), std::make_move_iterator(log.failures.begin()),
                           std::make_move_iterator(log.failures.end()));
  }
  return result;
}

std::vector<MetricsTableRow> summarise(const SimulationResult& result, AbsErrorSummary mae_kind) {
  std::vector<MetricsTableRow> rows;
  for (std::size_t c = 0; c < result.cells.size(); ++c) {
    for (std::size_t e = 0; e < result.estimator_ids.size(); ++e) {
      std::vector<double> values;
      values.reserve(result.reps);
      for (std::size_t r = 0; r < result.reps; ++r) {
        const double v = result.estimate(r, c, e);
        if (std::isfinite(v)) values.push_back(v);
      }
      if (values.empty()) continue;
      MetricsTableRow row;
      row.cell = result.cells[c];
      row.metrics = compute_metrics(values, result.mu_true, mae_kind);
      row.metrics.estimator = result.estimator_ids[e];
      row.excluded = result.reps - values.size();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace drm
