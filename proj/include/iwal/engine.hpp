#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "iwal/erm.hpp"
#include "iwal/hypothesis.hpp"
#include "iwal/stream.hpp"
#include "iwal/threshold.hpp"
#include "iwal/weighted_sample.hpp"

namespace iwal {

// One protocol round. gap is +infinity on degenerate rounds where every
// hypothesis agrees with the leader at x, so no alternative exists.
struct RoundRecord {
    std::uint64_t k = 0;
    Point x;
    double gap = 0.0;
    double p = 1.0;
    bool queried = false;
    std::optional<Label> y; // present iff queried
    std::uint64_t queries_so_far = 0;
};

// State after round n: the minimizer over everything seen so far and the
// query budget spent reaching it.
struct Checkpoint {
    std::uint64_t n = 0;
    std::size_t erm_id = 0;
    std::uint64_t queries = 0;
};

struct EngineOptions {
    bool keep_rounds = false;               // record every round, not just checkpoints
    std::vector<std::uint64_t> checkpoints; // strictly increasing, each <= rounds
};

struct RunResult {
    std::size_t final_erm_id = 0;
    std::uint64_t rounds = 0;
    std::uint64_t queries = 0;
    std::uint64_t labels_opened = 0; // stream opens charged to this run
    std::vector<Checkpoint> checkpoints;
    std::vector<RoundRecord> round_log; // empty unless keep_rounds
};

// Importance-weighted active learning loop. Each round: pick the current
// best hypothesis and the best one disagreeing with it at x, turn their
// weighted-error gap into a query probability, flip a coin, and only on
// heads open the label and feed the 1/p weighted example to the oracle.
class IwalEngine {
public:
    IwalEngine(std::shared_ptr<const HypothesisClass> cls, ThresholdConfig cfg,
               std::uint64_t coin_seed);

    RunResult run(const LabeledStream& stream, std::uint64_t rounds,
                  const EngineOptions& opts = {}) const;
    // Same loop against a caller-supplied oracle (must be empty).
    RunResult run(const LabeledStream& stream, std::uint64_t rounds,
                  const EngineOptions& opts, ErmOracle& oracle) const;

    const HypothesisClass& hypothesis_class() const { return *cls_; }
    const ThresholdConfig& config() const { return cfg_; }

private:
    std::shared_ptr<const HypothesisClass> cls_;
    ThresholdConfig cfg_;
    std::uint64_t coin_seed_;
};

// Supervised reference on the same stream: every label opened, weight 1.
RunResult passive_baseline(const std::shared_ptr<const HypothesisClass>& cls,
                           const LabeledStream& stream, std::uint64_t rounds,
                           const std::vector<std::uint64_t>& checkpoints = {});

// Rebuild the weighted sample a run accumulated (requires keep_rounds).
WeightedSample sample_from_rounds(const std::vector<RoundRecord>& log);
// Same rounds as interaction records for estimator checks.
std::vector<InteractionRecord> records_from_rounds(const std::vector<RoundRecord>& log);

// One JSON object per round: {"k":..,"gap":..,"p":..,"queried":..,"queries":..}.
// Degenerate rounds write null for gap.
void write_trace_jsonl(const std::string& path, const RunResult& result);

} // namespace iwal
