#include "cavlie/report.hpp"

namespace cavlie::cli {

namespace {

template <typename T>
void opt(const Json& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config field '") + key + "': " + e.what());
        }
    }
}

}  // namespace

AnalysisConfig parse_config(const Json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    AnalysisConfig c;
    opt(j, "model", c.model);
    opt(j, "atoms", c.atoms);
    opt(j, "cutoff", c.cutoff);
    opt(j, "generators", c.generators);
    opt(j, "tolerance", c.tolerance);
    opt(j, "seed", c.seed);
    opt(j, "identity_tolerance", c.identity_tolerance);
    if (c.tolerance <= 0) throw ConfigError("tolerance must be positive");
    if (j.contains("synthesis")) {
        const Json& s = j.at("synthesis");
        SynthesisConfig sc;
        opt(s, "task", sc.task);
        if (s.contains("target")) {
            const Json& t = s.at("target");
            opt(t, "type", sc.target_type);
            opt(t, "generator", sc.target_generator);
            opt(t, "angle", sc.target_angle);
            opt(t, "initial", sc.initial_label);
            opt(t, "final", sc.final_label);
        }
        opt(s, "truncation", sc.truncation);
        opt(s, "eps", sc.eps);
        opt(s, "budget", sc.budget);
        opt(s, "restarts", sc.restarts);
        opt(s, "probe_vectors", sc.probe_vectors);
        opt(s, "phase_free", sc.phase_free);
        c.synthesis = sc;
    }
    return c;
}

Json config_to_json(const AnalysisConfig& c) {
    Json j;
    j["model"] = c.model;
    j["atoms"] = c.atoms;
    j["cutoff"] = c.cutoff;
    j["generators"] = c.generators;
    j["tolerance"] = c.tolerance;
    j["seed"] = c.seed;
    j["identity_tolerance"] = c.identity_tolerance;
    if (c.synthesis) {
        const auto& s = *c.synthesis;
        Json t;
        t["type"] = s.target_type;
        if (!s.target_generator.empty()) t["generator"] = s.target_generator;
        if (s.target_type == "generator_exponential") t["angle"] = s.target_angle;
        if (!s.initial_label.empty()) t["initial"] = s.initial_label;
        if (!s.final_label.empty()) t["final"] = s.final_label;
        Json sj;
        sj["task"] = s.task;
        sj["target"] = t;
        sj["truncation"] = s.truncation;
        sj["eps"] = s.eps;
        sj["budget"] = s.budget;
        sj["restarts"] = s.restarts;
        sj["probe_vectors"] = s.probe_vectors;
        sj["phase_free"] = s.phase_free;
        j["synthesis"] = sj;
    }
    return j;
}

}  // namespace cavlie::cli
