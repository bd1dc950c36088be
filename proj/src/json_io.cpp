#include "seqtest/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <string_view>

#include "seqtest/errors.hpp"

namespace seqtest {
namespace {

using nlohmann::json;

// NaN and infinities have no JSON representation.
json real(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <typename T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

void require_known_keys(const json& j, std::initializer_list<std::string_view> known,
                        const char* where) {
  for (const auto& item : j.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ConfigError(std::string(where) + ": unknown field '" + item.key() + "'");
    }
  }
}

}  // namespace

ThresholdPolicy policy_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("policy must be a JSON object");
  require_known_keys(j,
                     {"mode", "alpha", "C", "C0", "C3", "small_variance_floor", "V0",
                      "multiplier", "increment_width"},
                     "policy");
  ThresholdPolicy p;
  p.mode = threshold_mode_from_string(field<std::string>(j, "mode", "sequential_practical"));
  p.alpha = field(j, "alpha", p.alpha);
  p.C = field(j, "C", p.C);
  if (j.contains("C0") && !j.at("C0").is_null()) p.C0 = field(j, "C0", 0.0);
  p.C3 = field(j, "C3", p.C3);
  p.small_variance_floor = field(j, "small_variance_floor", p.small_variance_floor);
  if (j.contains("V0") && !j.at("V0").is_null()) p.V0 = field(j, "V0", 0.0);
  p.multiplier = field(j, "multiplier", p.multiplier);
  p.increment_width = field(j, "increment_width", p.increment_width);
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return p;
}

json to_json(const ThresholdPolicy& policy) {
  json j = {
      {"mode", std::string(to_string(policy.mode))},
      {"alpha", policy.alpha},
      {"C", policy.C},
      {"C0", policy.additive_constant()},
      {"C3", policy.C3},
  };
  if (policy.V0) j["V0"] = *policy.V0;
  if (policy.small_variance_floor) j["small_variance_floor"] = true;
  if (policy.multiplier != 1.0) j["multiplier"] = policy.multiplier;
  if (policy.mode == ThresholdMode::batch_hoeffding) j["increment_width"] = policy.increment_width;
  return j;
}

json to_json(const TestVerdict& verdict) {
  return {
      {"decision", std::string(to_string(verdict.decision))},
      {"tau", verdict.tau},
      {"statistic", real(verdict.statistic_at_stop)},
      {"boundary", real(verdict.boundary_at_stop)},
      {"exhausted", verdict.exhausted},
  };
}

json to_json(const PowerReport& report) {
  return {
      {"N", report.N},
      {"alpha", report.alpha},
      {"beta", real(report.beta)},
      {"predicted_power", real(report.predicted_power)},
      {"V_N0", real(report.V_N0)},
      {"V_N1", real(report.V_N1)},
  };
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  if (!j.contains("experiment")) throw ConfigError("experiment config needs 'experiment'");
  require_known_keys(j,
                     {"experiment", "family", "spec", "policy", "batch_policy", "sidedness",
                      "N_max", "trials", "alpha_grid", "n_grid", "seed", "output_path",
                      "checkpoints", "threads"},
                     "experiment config");
  ExperimentConfig c;
  c.experiment = experiment_kind_from_string(field<std::string>(j, "experiment", ""));
  if (j.contains("family")) c.family = family_from_string(field<std::string>(j, "family", ""));
  if (j.contains("spec")) {
    const json& spec = j.at("spec");
    if (!spec.is_object()) throw ConfigError("spec must be a JSON object");
    require_known_keys(spec, {"deltas", "delta", "d", "sigma", "rho"}, "spec");
    c.deltas = field(spec, "deltas", c.deltas);
    if (spec.contains("delta")) c.deltas = {field(spec, "delta", 0.0)};
    c.d = field(spec, "d", c.d);
    c.sigma = field(spec, "sigma", c.sigma);
    c.rho = field(spec, "rho", c.rho);
  }
  if (j.contains("policy")) c.policy = policy_from_json(j.at("policy"));
  if (j.contains("batch_policy")) c.batch_policy = policy_from_json(j.at("batch_policy"));
  if (j.contains("sidedness")) {
    c.sidedness = sidedness_from_string(field<std::string>(j, "sidedness", ""));
  }
  c.N_max = field(j, "N_max", c.N_max);
  c.trials = field(j, "trials", c.trials);
  c.alpha_grid = field(j, "alpha_grid", c.alpha_grid);
  c.n_grid = field(j, "n_grid", c.n_grid);
  c.seed = field(j, "seed", c.seed);
  c.output_path = field(j, "output_path", c.output_path);
  c.checkpoints = field(j, "checkpoints", c.checkpoints);
  c.threads = field(j, "threads", c.threads);
  c.validate();
  return c;
}

json to_json(const ExperimentConfig& c) {
  json j = {
      {"experiment", std::string(to_string(c.experiment))},
      {"family", std::string(to_string(c.family))},
      {"spec", {{"deltas", c.deltas}, {"d", c.d}, {"sigma", c.sigma}, {"rho", c.rho}}},
      {"policy", to_json(c.policy)},
      {"sidedness", std::string(to_string(c.effective_sidedness()))},
      {"N_max", c.N_max},
      {"trials", c.trials},
      {"alpha_grid", c.alpha_grid},
      {"n_grid", c.n_grid},
      {"seed", c.seed},
      {"output_path", c.output_path},
      {"checkpoints", c.checkpoints},
  };
  if (c.batch_policy) j["batch_policy"] = to_json(*c.batch_policy);
  return j;
}

}  // namespace seqtest
