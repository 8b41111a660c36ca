#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "iwal/analysis.hpp"
#include "iwal/engine.hpp"
#include "iwal/stream.hpp"

namespace iwal {

// One empirical check: a named pass/fail verdict plus the numbers that
// decided it. Checks are deterministic given their seed parameters; Monte
// Carlo internals use independent per-trial substreams and reduce by
// counting, so evaluation order never matters.
struct CheckReport {
    std::string name;
    bool passed = false;
    std::string detail;
    std::vector<std::pair<std::string, double>> metrics;
};

// --- shared seeded experiment ---------------------------------------------------
//
// One threshold-class-on-uniform study: a grid class, a noise model, one
// engine run per seed with checkpoints, optionally a passive baseline on the
// identical stream and per-round logs for structural checks. Several checks
// read different aspects of the same study so it is run once and shared.

struct StudyParams {
    std::size_t class_size = 100;
    double grid_lo = 0.005;
    double grid_hi = 0.995;
    double base_boundary = 0.5; // labeler boundary (need not be a grid member)
    double eta = 0.1;
    bool margin_profile = false; // margin-shaped flip profile instead of uniform
    double margin_alpha = 1.0;
    double margin_width = 0.1;
    bool auto_c0 = false; // covering budget scale computed from (class, delta, rounds)
    double c0 = 2.0;
    double delta = 0.05;
    bool experimental = false; // c1 = c2 = 1
    std::uint64_t rounds = 10000;
    std::vector<std::uint64_t> checkpoints = {100, 1000, 10000}; // last == rounds
    std::uint64_t seed_count = 200;
    std::uint64_t master_seed = 20260816;
    bool with_passive = false;
    bool keep_rounds = false; // needed by the query-floor check
};

struct SeedOutcome {
    std::vector<Checkpoint> checkpoints;
    std::vector<double> checkpoint_excess; // true err of checkpoint erm minus err*
    double final_excess_active = 0.0;
    double final_excess_passive = 0.0; // only when with_passive
    double floor_min_p = 1.0; // min P_i on rounds where the final erm disagrees
                              // with h*; 1 when they never disagree (keep_rounds)
};

struct Study {
    StudyParams params;
    std::shared_ptr<const HypothesisClass> cls;
    DataDistribution dist;
    GroundTruth truth;
    double c0_used = 0.0;
    std::vector<SeedOutcome> seeds;
};

Study run_study(const StudyParams& params);

// Canned acceptance-scale configurations.
StudyParams consistency_study_params();  // eta 0.1, centered, auto c0, passive
StudyParams separable_study_params();    // eta 0, edge boundary, c1 = c2 = 1
StudyParams noisy_study_params();        // eta 0.1, edge boundary, c1 = c2 = 1
StudyParams tsybakov_study_params();     // margin profile alpha 1, 1e5 rounds

// --- checks over a shared study --------------------------------------------------

// Excess error within the consistency envelope at every checkpoint for >= 93%
// of seeds, and median |active - passive| final error below 0.02.
CheckReport check_consistency(const Study& study);

// On seeds whose runs stay inside the consistency envelope, every round where
// the final erm disagrees with h* carries query probability >= 1/2.
CheckReport check_query_floor(const Study& study);

// Median query counts: calibrate a*sqrt(n ln n) + b*ln^3 n on the first two
// checkpoints, final median <= 1.5x the extrapolated curve and <= 0.25 * n.
CheckReport check_separable_complexity(const Study& study);

// Mean query counts stay under the summed per-round strict envelope at every
// checkpoint; reports the measured final rate against the 2*theta*err* floor.
CheckReport check_noisy_complexity(const Study& study);

// Mean excess error decays from checkpoint 1e3 to 1e4 with log-log slope
// <= -0.7 (a vanishing final mean passes outright).
CheckReport check_excess_decay(const Study& study);

// Log-log slope of median queries across the checkpoints is 0.5 +- 0.15.
CheckReport check_tsybakov_slope(const Study& study);

// --- self-contained checks -------------------------------------------------------

struct UnbiasednessParams {
    std::uint64_t points = 20;
    std::uint64_t trials = 100000;
    double query_p = 0.5;
    std::uint64_t seed = 101;
};

// Mean importance-weighted error over coin resamples within 3 standard errors
// of the full-sample error, for five fixed hypotheses on one fixed stream.
CheckReport check_unbiasedness(const UnbiasednessParams& p = {});

struct RootCheckParams {
    std::uint64_t draws = 10000;
    std::uint64_t seed = 102;
};

// Random (k, G, c0) triples: back-substitution residual < 1e-9 * max(1, G),
// root in (0,1), monotone non-increasing in G, and for k <= 50 with G inside
// the recursion-attainable range, s >= k^-k.
CheckReport check_root_properties(const RootCheckParams& p = {});

struct CoverageParams {
    std::uint64_t n = 200;
    std::uint64_t trials = 10000;
    std::vector<double> tails = {4.0, 8.0, 12.0};
    std::uint64_t seed = 103;
};

// Empirical exceedance frequency of the deviation envelope stays under the
// companion failure probability plus 3 sigma binomial slack, for a fixed
// point-dependent query policy (1 - 0.75x) and a constant 0.5 policy.
CheckReport check_deviation_coverage(const CoverageParams& p = {});

struct ErmCheckParams {
    std::uint64_t instances = 1000;
    std::size_t max_class = 1000;
    std::uint64_t max_rounds = 1000;
    std::uint64_t seed = 104;
};

// erm and erm_with_disagreement against independent exhaustive scans on
// random classes and samples: ids and totals must match exactly.
CheckReport check_erm_equivalence(const ErmCheckParams& p = {});

// Disagreement coefficient of the 101-threshold class under uniform marginal
// with a centered boundary equals 2 within 0.1.
CheckReport check_theta_oracle();

struct HypothesisDeviationParams {
    std::uint64_t rounds = 1000;
    std::uint64_t runs = 200;
    std::uint64_t master_seed = 105;
};

// Per-hypothesis deviation bound sqrt(eps/pmin) + eps/pmin holds for every
// class member simultaneously in >= 93% of seeded runs.
CheckReport check_hypothesis_deviation(const HypothesisDeviationParams& p = {});

// --- registry for the command line ------------------------------------------------

// All suites at acceptance scale, in a fixed order; names are stable CLI keys.
std::vector<std::string> suite_names();

// Runs one named suite (studies are run on demand). Unknown name -> ConfigError.
std::vector<CheckReport> run_suite(const std::string& name);

} // namespace iwal
