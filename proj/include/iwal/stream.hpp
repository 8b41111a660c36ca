#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "iwal/hypothesis.hpp"
#include "iwal/rng.hpp"

namespace iwal {

// --- marginals -------------------------------------------------------------

struct Uniform01 {}; // 1-D uniform on [0, 1]

struct ProductUniform { // uniform on [0, 1]^dim
    std::size_t dim = 1;
};

struct PoolMarginal { // uniform over a finite pool
    std::shared_ptr<const PointPool> pool;
};

using Marginal = std::variant<Uniform01, ProductUniform, PoolMarginal>;

// --- labelers ----------------------------------------------------------------
//
// A labeler is a conditional law for Y given X. Both shipped forms are a
// deterministic base rule plus a flip probability eta(x) < 1/2.

// Position-independent flip rate.
struct FlipLabeler {
    HypothesisRule base; // deterministic labeler h(x)
    double eta = 0.0;    // P(Y != h(x)), in [0, 1/2)
};

// 1-D threshold base at `boundary` with a margin profile: the flip rate
// climbs toward 1/2 as x approaches the boundary,
//   1 - 2*eta(x) = (1 - 2*eta_far) * min(1, |x - boundary| / width)^beta,
// beta = (1 - alpha)/alpha. alpha = 1 reduces to a constant flip rate; the
// low-noise exponent of the induced distribution is exactly alpha while
// distances stay inside the profile width.
struct MarginLabeler {
    double boundary = 0.5;
    double alpha = 1.0; // in (0, 1]
    double width = 0.5; // profile saturates at |x - boundary| = width
    double eta_far = 0.0;

    double beta() const { return (1.0 - alpha) / alpha; }
    double flip_rate(double x) const;
    Label base_label(double x) const; // +1 iff x >= boundary
    // integral of (1 - 2*eta) over [a, b], closed form
    double certainty_mass(double a, double b) const;
};

using Labeler = std::variant<FlipLabeler, MarginLabeler>;

MarginLabeler tsybakov_labeler(double alpha, double boundary, double width,
                               double eta_far);

struct DataDistribution {
    Marginal marginal;
    Labeler labeler;
};

void validate_distribution(const DataDistribution& dist);
std::size_t marginal_dimension(const Marginal& m);

// --- lazy labeled stream -----------------------------------------------------
//
// point(k) and label(k) are pure functions of (distribution, seed, k), so the
// label of any round can be opened lazily, in any order, or never, without
// disturbing anything else. label() counts opens; the learning loop must
// account for every open with a heads coin.

class LabeledStream {
public:
    LabeledStream(DataDistribution dist, std::uint64_t seed);

    const DataDistribution& distribution() const { return dist_; }
    std::uint64_t seed() const { return seed_; }

    Point point(std::uint64_t k) const; // k is 1-based
    Label label(std::uint64_t k) const;

    std::uint64_t labels_opened() const { return opens_; }

private:
    DataDistribution dist_;
    std::uint64_t seed_;
    CounterRng point_rng_;
    CounterRng label_rng_;
    std::optional<Hypothesis> flip_base_; // cached deterministic rule of a FlipLabeler
    mutable std::uint64_t opens_ = 0;
};

// Capability token for reading one round's label after a heads coin.
struct LabelHandle {
    const LabeledStream* stream = nullptr;
    std::uint64_t k = 0;

    Label open() const { return stream->label(k); }
};

inline LabeledStream draw_stream(DataDistribution dist, std::uint64_t seed) {
    return LabeledStream(std::move(dist), seed);
}

// --- exact quantities --------------------------------------------------------

// P(h(X) != Y). Exact for finite pools (any hypothesis form) and for the
// uniform 1-D marginal with interval-representable hypotheses; anything else
// throws UnsupportedError directing the caller to true_error_mc.
double true_error(const Hypothesis& h, const DataDistribution& dist);

// P(h(X) != g(X)) under the marginal, same support matrix as true_error.
double disagreement_mass(const Hypothesis& h, const Hypothesis& g,
                         const DataDistribution& dist);

// Monte Carlo fallback, usable with every marginal/labeler pair.
double true_error_mc(const Hypothesis& h, const DataDistribution& dist,
                     std::uint64_t samples, std::uint64_t seed);

// Disjoint closed subintervals of [0, 1]; boundary measure is irrelevant to
// every consumer.
using Intervals = std::vector<std::pair<double, double>>;

// Region of [0, 1] where a 1-D hypothesis predicts +1.
Intervals plus_region(const Hypothesis& h);

Intervals interval_symmetric_difference(const Intervals& a, const Intervals& b);
Intervals interval_union(const std::vector<Intervals>& regions);
double interval_length(const Intervals& iv);

struct GroundTruth {
    std::size_t hstar_id = 0; // lowest-id minimizer of the true error
    double err_star = 0.0;
};

GroundTruth ground_truth(const HypothesisClass& cls, const DataDistribution& dist);

} // namespace iwal
