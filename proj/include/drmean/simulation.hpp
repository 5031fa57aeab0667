#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "drmean/estimators.hpp"
#include "drmean/metrics.hpp"
#include "drmean/scenario.hpp"

namespace drm {

// Which covariate view each fitted model receives: the latent z (correct)
// or the observed transforms x (incorrect).
enum class GridCell { BothCorrect, YCorrectOnly, PiCorrectOnly, BothWrong };

std::string to_string(GridCell cell);
GridCell parse_grid_cell(const std::string& text);
bool y_model_correct(GridCell cell) noexcept;
bool pi_model_correct(GridCell cell) noexcept;
// The cell named by the scenario's own y/pi correctness flags.
GridCell default_cell(const ScenarioSpec& spec) noexcept;

struct RunConfig {
  ScenarioSpec scenario;
  std::size_t n = 200;
  std::size_t reps = 1000;
  std::vector<EstimatorConfig> estimators;
  std::uint64_t seed = 1;
  std::vector<GridCell> spec_grid;  // empty: the scenario's default cell
  unsigned threads = 1;
  AbsErrorSummary mae_kind = AbsErrorSummary::Median;

  void validate() const;
};

struct ReplicateFailure {
  std::size_t rep;
  GridCell cell;
  std::string estimator;
  std::string message;
};

struct SimulationResult {
  std::vector<GridCell> cells;
  std::vector<std::string> estimator_ids;
  std::size_t reps = 0;
  double mu_true = 0.0;
  // Indexed [(rep * cells + cell) * estimators + estimator]; NaN on failure.
  std::vector<double> estimates;
  std::vector<ReplicateFailure> failures;  // ordered by (rep, cell, estimator)

  double estimate(std::size_t rep, std::size_t cell, std::size_t est) const {
    return estimates[(rep * cells.size() + cell) * estimator_ids.size() + est];
  }
};

struct MetricsTableRow {
  GridCell cell;
  MetricsRow metrics;
  std::size_t excluded = 0;
};

SimulationResult run_simulation(const RunConfig& config);

// One row per (cell, estimator); failed replicates excluded listwise.
// Rows with no surviving replicates are omitted.
std::vector<MetricsTableRow> summarise(const SimulationResult& result,
                                       AbsErrorSummary mae_kind = AbsErrorSummary::Median);

}  // namespace drm
