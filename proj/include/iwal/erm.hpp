#pragma once

#include <optional>

#include "iwal/weighted_sample.hpp"

namespace iwal {

struct ErmResult {
    std::size_t id = 0;
    double error = 0.0; // weighted error, total / round_count
    double total = 0.0; // raw mistake mass used for the argmin
};

// Exact minimizer of the importance-weighted error over the class; ties go to
// the lowest id. Empty sample returns id 0 with error 0.
ErmResult erm(const HypothesisClass& cls, const WeightedSample& s);

// Exact minimizer among hypotheses with h(x) != forbidden. Empty candidate
// set (every member predicts forbidden at x) -> nullopt.
std::optional<ErmResult> erm_with_disagreement(const HypothesisClass& cls,
                                               const WeightedSample& s,
                                               const Point& x, Label forbidden);

// Pluggable selection oracle consumed by the learning loop. observe() is
// called once per queried example in round order; minimizers compare raw
// totals, ties to lowest id.
class ErmOracle {
public:
    struct Choice {
        std::size_t id = 0;
        double total = 0.0;
    };

    virtual ~ErmOracle() = default;

    virtual void observe(const WeightedExample& ex) = 0;
    virtual Choice best() const = 0;
    virtual std::optional<Choice> best_disagreeing(const Point& x, Label forbidden) const = 0;
};

// Exact finite-class oracle: one running total per hypothesis, updated in
// O(|class|) per queried example. Totals match a fresh scan bit for bit
// because each hypothesis accumulates the same additions in the same order.
class FiniteClassOracle final : public ErmOracle {
public:
    explicit FiniteClassOracle(const HypothesisClass& cls);

    void observe(const WeightedExample& ex) override;
    Choice best() const override;
    std::optional<Choice> best_disagreeing(const Point& x, Label forbidden) const override;

    const std::vector<double>& totals() const { return totals_; }

private:
    const HypothesisClass* cls_;
    std::vector<double> totals_;
};

} // namespace iwal
