#pragma once

#include <string>

#include <json.hpp>
#include <tailfrac/montecarlo.hpp>

namespace tailfrac::cli {

// Strict parse: unknown keys and missing required keys are errors.
ExperimentConfig config_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const ExperimentConfig& cfg);

ExperimentConfig load_config_file(const std::string& path);

void write_manifest(const std::string& output_path, const std::string& command,
                    const nlohmann::json& config, std::uint64_t seed);

}  // namespace tailfrac::cli
