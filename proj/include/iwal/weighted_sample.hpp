#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "iwal/hypothesis.hpp"

namespace iwal {

// One queried example. weight is the inverse of the query probability at the
// round it was captured, so weights are >= 1 and finite.
struct WeightedExample {
    std::uint64_t round = 0;
    Point x;
    Label y = Label::positive;
    double weight = 1.0;
};

// Append-only log of queried examples. round_count tracks ALL protocol
// rounds, queried or not; every weighted average divides by it, never by the
// number of stored examples.
class WeightedSample {
public:
    void advance_round() { ++round_count_; }
    void append(WeightedExample ex); // validates weight and round ordering

    std::uint64_t round_count() const { return round_count_; }
    const std::vector<WeightedExample>& examples() const { return examples_; }
    std::size_t query_count() const { return examples_.size(); }

private:
    std::vector<WeightedExample> examples_;
    std::uint64_t round_count_ = 0;
};

// Raw importance-weighted mistake mass of h on the sample, in storage order.
// Argmin comparisons use this form so ties are decided on exact sums.
double weighted_error_total(const Hypothesis& h, const WeightedSample& s);

// (1/round_count) * total. Zero rounds -> 0. May legitimately exceed 1.
double weighted_error(const Hypothesis& h, const WeightedSample& s);

// One protocol round as the estimator sees it: the label is present exactly
// when the query coin came up heads.
struct InteractionRecord {
    Point x;
    double p = 1.0; // query probability used at this round, in (0, 1]
    bool queried = false;
    std::optional<Label> y;
};

void validate_record(const InteractionRecord& r);

// Importance-weighted mean (1/n) * sum Q_i / P_i * f(X_i, Y_i) over n = all
// records. Unqueried rounds contribute zero and their y is never touched.
// Unbiased for E[f] whenever every P_i > 0; |f| <= 1 is the caller's
// contract, not enforced.
template <typename F>
double weighted_mean(F&& f, const std::vector<InteractionRecord>& records) {
    if (records.empty()) return 0.0;
    double total = 0.0;
    for (const auto& r : records) {
        validate_record(r);
        if (r.queried) total += f(r.x, *r.y) / r.p;
    }
    return total / static_cast<double>(records.size());
}

// CSV with header round,x0..x{d-1},y,weight; doubles are shortest
// round-trip so exports are byte-stable across reruns.
void write_sample_csv(const WeightedSample& s, std::ostream& out);

} // namespace iwal
