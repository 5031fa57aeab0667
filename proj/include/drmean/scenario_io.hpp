#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "drmean/scenario.hpp"

namespace drm {

// Scenario files are JSON documents:
//   {
//     "name": "...", "latent_dim": 4,
//     "outcome":    {"intercept": 0, "coefficients": [...], "noise_sd": 1},
//     "propensity": {"intercept": 0, "coefficients": [...]},
//     "transforms": ["exp(z1/2)", ...],
//     "variant": "classic" | "alt_x4",
//     "observe_latent": false, "reverse_roles": false,
//     "y_model_correct": false, "pi_model_correct": false
//   }
// A null value or the string "FILL_IN" marks a placeholder the operator must
// replace; loading such a file fails with ConfigError naming the field.
inline constexpr std::string_view kPlaceholder = "FILL_IN";

ScenarioSpec parse_scenario(std::string_view json_text);
ScenarioSpec load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const ScenarioSpec& spec);

}  // namespace drm
