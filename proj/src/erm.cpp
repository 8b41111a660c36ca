#include "iwal/erm.hpp"

namespace iwal {

namespace {

double divide_by_rounds(double total, const WeightedSample& s) {
    return s.round_count() == 0 ? 0.0
                                : total / static_cast<double>(s.round_count());
}

} // namespace

ErmResult erm(const HypothesisClass& cls, const WeightedSample& s) {
    if (cls.size() == 0) throw Error("erm over an empty class");
    ErmResult best{0, 0.0, weighted_error_total(cls.at(0), s)};
    for (std::size_t id = 1; id < cls.size(); ++id) {
        const double total = weighted_error_total(cls.at(id), s);
        if (total < best.total) best = {id, 0.0, total};
    }
    best.error = divide_by_rounds(best.total, s);
    return best;
}

std::optional<ErmResult> erm_with_disagreement(const HypothesisClass& cls,
                                               const WeightedSample& s,
                                               const Point& x, Label forbidden) {
    std::optional<ErmResult> best;
    for (std::size_t id = 0; id < cls.size(); ++id) {
        const Hypothesis& h = cls.at(id);
        if (h(x) == forbidden) continue;
        const double total = weighted_error_total(h, s);
        if (!best || total < best->total) best = ErmResult{id, 0.0, total};
    }
    if (best) best->error = divide_by_rounds(best->total, s);
    return best;
}

FiniteClassOracle::FiniteClassOracle(const HypothesisClass& cls)
    : cls_(&cls), totals_(cls.size(), 0.0) {
    if (cls.size() == 0) throw Error("oracle over an empty class");
}

void FiniteClassOracle::observe(const WeightedExample& ex) {
    const auto& members = cls_->members();
    for (std::size_t id = 0; id < totals_.size(); ++id)
        if (members[id](ex.x) != ex.y) totals_[id] += ex.weight;
}

FiniteClassOracle::Choice FiniteClassOracle::best() const {
    Choice best{0, totals_[0]};
    for (std::size_t id = 1; id < totals_.size(); ++id)
        if (totals_[id] < best.total) best = {id, totals_[id]};
    return best;
}

std::optional<FiniteClassOracle::Choice>
FiniteClassOracle::best_disagreeing(const Point& x, Label forbidden) const {
    const auto& members = cls_->members();
    std::optional<Choice> best;
    for (std::size_t id = 0; id < totals_.size(); ++id) {
        if (members[id](x) == forbidden) continue;
        if (!best || totals_[id] < best->total) best = Choice{id, totals_[id]};
    }
    return best;
}

} // namespace iwal
