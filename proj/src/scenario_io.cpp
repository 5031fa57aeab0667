#include "drmean/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "drmean/error.hpp"

namespace drm {
namespace {

using nlohmann::json;

const json& field(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::ConfigError, "missing field '" + path + "'");
  if (it->is_null() || (it->is_string() && it->get<std::string>() == kPlaceholder)) {
    throw Error(ErrorCode::ConfigError,
                "placeholder field '" + path + "' must be filled before use");
  }
  return *it;
}

double number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number()) throw Error(ErrorCode::ConfigError, "field '" + path + "' must be a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& obj, const std::string& key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_array()) throw Error(ErrorCode::ConfigError, "field '" + path + "' must be a list");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_null() || (v[i].is_string() && v[i].get<std::string>() == kPlaceholder)) {
      throw Error(ErrorCode::ConfigError, "placeholder field '" + path + "[" +
                                              std::to_string(i) + "]' must be filled before use");
    }
    if (!v[i].is_number()) {
      throw Error(ErrorCode::ConfigError, "field '" + path + "' must hold numbers");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

bool flag(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end()) return false;
  if (!it->is_boolean()) throw Error(ErrorCode::ConfigError, "field '" + key + "' must be true/false");
  return it->get<bool>();
}

}  // namespace

ScenarioSpec parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("scenario file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ConfigError, "scenario file must hold an object");

  ScenarioSpec spec;
  spec.name = doc.value("name", std::string{});
  const json& dim = field(doc, "latent_dim", "latent_dim");
  if (!dim.is_number_unsigned()) {
    throw Error(ErrorCode::ConfigError, "field 'latent_dim' must be a positive integer");
  }
  spec.latent_dim = dim.get<std::size_t>();

  const json& outcome = field(doc, "outcome", "outcome");
  spec.outcome_intercept = number(outcome, "intercept", "outcome.intercept");
  spec.outcome_coefs = numbers(outcome, "coefficients", "outcome.coefficients");
  spec.noise_sd = number(outcome, "noise_sd", "outcome.noise_sd");

  const json& propensity = field(doc, "propensity", "propensity");
  spec.propensity_intercept = number(propensity, "intercept", "propensity.intercept");
  spec.propensity_coefs = numbers(propensity, "coefficients", "propensity.coefficients");

  spec.observe_latent = flag(doc, "observe_latent");
  spec.reverse_roles = flag(doc, "reverse_roles");
  spec.y_model_correct = flag(doc, "y_model_correct");
  spec.pi_model_correct = flag(doc, "pi_model_correct");

  if (doc.contains("transforms")) {
    const json& transforms = field(doc, "transforms", "transforms");
    if (!transforms.is_array()) throw Error(ErrorCode::ConfigError, "'transforms' must be a list");
    for (std::size_t i = 0; i < transforms.size(); ++i) {
      const std::string path = "transforms[" + std::to_string(i) + "]";
      if (transforms[i].is_null() ||
          (transforms[i].is_string() && transforms[i].get<std::string>() == kPlaceholder)) {
        throw Error(ErrorCode::ConfigError, "placeholder field '" + path + "' must be filled before use");
      }
      if (!transforms[i].is_string()) throw Error(ErrorCode::ConfigError, path + " must be a string");
      try {
        spec.transforms.push_back(Expression::parse(transforms[i].get<std::string>()));
      } catch (const ParseError& e) {
        throw Error(ErrorCode::ConfigError, path + ": " + e.what());
      }
    }
  }

  const std::string variant = doc.value("variant", std::string("classic"));
  if (variant == "alt_x4") {
    apply_alternative_x4(spec);
  } else if (variant != "classic") {
    throw Error(ErrorCode::ConfigError, "unknown variant '" + variant + "'");
  }

  spec.validate();
  return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const ScenarioSpec& spec) {
  json doc;
  doc["name"] = spec.name;
  doc["latent_dim"] = spec.latent_dim;
  doc["outcome"] = {{"intercept", spec.outcome_intercept},
                    {"coefficients", spec.outcome_coefs},
                    {"noise_sd", spec.noise_sd}};
  doc["propensity"] = {{"intercept", spec.propensity_intercept},
                       {"coefficients", spec.propensity_coefs}};
  json transforms = json::array();
  for (const auto& t : spec.transforms) transforms.push_back(t.source());
  doc["transforms"] = transforms;
  doc["observe_latent"] = spec.observe_latent;
  doc["reverse_roles"] = spec.reverse_roles;
  doc["y_model_correct"] = spec.y_model_correct;
  doc["pi_model_correct"] = spec.pi_model_correct;
  return doc.dump(2);
}

}  // namespace drm
