#pragma once

#include <json.hpp>

#include "seqtest/analysis.hpp"
#include "seqtest/core.hpp"
#include "seqtest/experiments.hpp"
#include "seqtest/thresholds.hpp"

namespace seqtest {

// {"mode", "alpha", "C", "C0", "C3", ...}. Missing fields take their defaults.
ThresholdPolicy policy_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ThresholdPolicy& policy);

// {"decision", "tau", "statistic", "boundary", "exhausted"}
nlohmann::json to_json(const TestVerdict& verdict);

nlohmann::json to_json(const PowerReport& report);

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace seqtest
