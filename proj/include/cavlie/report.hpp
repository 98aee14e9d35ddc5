// report.hpp — run configuration and machine-readable report plumbing.
#pragma once

#include "cavlie/operator_core.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cavlie::cli {

using Json = nlohmann::ordered_json;

struct SynthesisConfig {
    std::string task = "unitary";  // "unitary" | "state"
    std::string target_type = "random_unitary";
    std::string target_generator;  // generator_exponential
    double target_angle = 0.0;
    std::vector<int> initial_label;  // state_transfer: {mu, label}
    std::vector<int> final_label;
    int truncation = -1;  // synthesis space cutoff; -1 = model cutoff
    double eps = 1e-2;
    int budget = 100;
    int restarts = 5;
    int probe_vectors = 3;
    bool phase_free = true;
};

struct AnalysisConfig {
    std::string model = "jc";
    int atoms = 1;
    int cutoff = 4;
    std::vector<std::string> generators;  // empty = command default
    double tolerance = tol::rank;
    std::uint64_t seed = 0;
    double identity_tolerance = 1e-10;
    std::optional<SynthesisConfig> synthesis;
};

AnalysisConfig parse_config(const Json& j);
Json config_to_json(const AnalysisConfig& c);

}  // namespace cavlie::cli
