#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "iwal/hypothesis.hpp"
#include "iwal/stream.hpp"
#include "iwal/threshold.hpp"

namespace iwal {

// Query-probability schedule settings as they appear in a config file. The
// numeric c0 is resolved lazily so "auto" can see the class size and horizon.
struct ThresholdSpec {
    bool auto_c0 = false;
    double c0 = 2.0;             // ignored when auto_c0
    double delta = 0.05;
    std::uint64_t horizon = 0;   // probe horizon for auto c0; 0 means rounds
    bool experimental = false;
    double c1 = 1.0;             // experimental mode only
    double c2 = 1.0;
    double degenerate_p = 1.0;
};

// A declarative experiment: what to learn on, how to query, how long, and
// which seeds. Parsed strictly; unknown keys anywhere are rejected.
struct ExperimentConfig {
    std::shared_ptr<const HypothesisClass> cls;
    DataDistribution dist;
    ThresholdSpec threshold;
    std::uint64_t rounds = 0;
    std::vector<std::uint64_t> checkpoints; // strictly increasing, <= rounds
    std::vector<std::uint64_t> seeds;       // one engine run per seed
    std::string output_dir;

    // original sub-documents, kept so the effective config echoes what was
    // asked for rather than a re-derivation
    nlohmann::json class_json;
    nlohmann::json stream_json;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config_file(const std::string& path);

// Resolved numeric c0: the configured value, or default_c0 over the probe
// horizon (falling back to rounds) when the file says "auto".
double resolve_c0(const ExperimentConfig& cfg);
ThresholdConfig make_threshold_config(const ExperimentConfig& cfg);

// Marginal / labeler sub-documents, shared by config files and the echo.
Marginal marginal_from_json(const nlohmann::json& j);
nlohmann::json marginal_to_json(const Marginal& m);
Labeler labeler_from_json(const nlohmann::json& j);
nlohmann::json labeler_to_json(const Labeler& l);
DataDistribution distribution_from_json(const nlohmann::json& j);
nlohmann::json distribution_to_json(const DataDistribution& d);

// Class sub-document: {"form":"threshold_grid",...} shorthand or the
// explicit {"hypotheses":[...]} list.
std::shared_ptr<const HypothesisClass> class_spec_from_json(const nlohmann::json& j);

} // namespace iwal
