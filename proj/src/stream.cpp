#include "iwal/stream.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "iwal/error.hpp"

namespace iwal {

namespace {

void append_clamped(Intervals& out, double lo, double hi) {
    lo = std::max(0.0, lo);
    hi = std::min(1.0, hi);
    if (lo <= hi) out.emplace_back(lo, hi);
}

Intervals plus_region_rule(const HypothesisRule& rule) {
    Intervals out;
    if (const auto* t = std::get_if<ThresholdRule>(&rule)) {
        if (t->orientation == +1)
            append_clamped(out, t->t, 1.0);
        else
            append_clamped(out, 0.0, t->t);
        return out;
    }
    if (const auto* iv = std::get_if<IntervalRule>(&rule)) {
        append_clamped(out, iv->lo, iv->hi);
        return out;
    }
    if (const auto* s = std::get_if<StumpRule>(&rule)) {
        if (s->axis != 0)
            throw UnsupportedError("plus_region: stump axis must be 0 on a 1-D domain");
        if (s->orientation == +1)
            append_clamped(out, s->t, 1.0);
        else
            append_clamped(out, 0.0, s->t);
        return out;
    }
    throw UnsupportedError("plus_region: truth-table hypotheses have no interval form; "
                           "use a pool marginal or true_error_mc");
}

bool intervals_contain(const Intervals& iv, double x) {
    for (const auto& [lo, hi] : iv)
        if (lo <= x && x <= hi) return true;
    return false;
}

// integral of (1 - 2*eta) over a distance-from-boundary range [0, t]
double one_sided_certainty(double t, double scale, double width, double beta) {
    if (t <= 0.0) return 0.0;
    double inner = std::min(t, width);
    double mass = scale * width / (beta + 1.0) * std::pow(inner / width, beta + 1.0);
    if (t > width) mass += scale * (t - width);
    return mass;
}

struct LabelStats {
    Label base;
    double eta;
};

LabelStats stats_at(const Labeler& labeler, const Point& x,
                    const std::optional<Hypothesis>& flip_base) {
    if (const auto* f = std::get_if<FlipLabeler>(&labeler))
        return {(*flip_base)(x), f->eta};
    const auto& m = std::get<MarginLabeler>(labeler);
    if (x.coords.size() != 1)
        throw DimensionError("margin labeler needs 1-D points");
    return {m.base_label(x.coords[0]), m.flip_rate(x.coords[0])};
}

std::optional<Hypothesis> flip_base_of(const Labeler& labeler) {
    if (const auto* f = std::get_if<FlipLabeler>(&labeler))
        return Hypothesis(0, f->base);
    return std::nullopt;
}

const PointPool& require_pool(const Marginal& m) {
    const auto* p = std::get_if<PoolMarginal>(&m);
    if (p == nullptr || p->pool == nullptr)
        throw Error("expected a pool marginal");
    return *p->pool;
}

} // namespace

// Segments of [0, 1] inside exactly one of the two regions.
Intervals interval_symmetric_difference(const Intervals& a, const Intervals& b) {
    std::vector<double> cuts{0.0, 1.0};
    for (const auto& [lo, hi] : a) {
        cuts.push_back(lo);
        cuts.push_back(hi);
    }
    for (const auto& [lo, hi] : b) {
        cuts.push_back(lo);
        cuts.push_back(hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    Intervals out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double lo = cuts[i];
        double hi = cuts[i + 1];
        if (!(lo < hi)) continue;
        double mid = 0.5 * (lo + hi);
        if (intervals_contain(a, mid) == intervals_contain(b, mid)) continue;
        if (!out.empty() && out.back().second == lo)
            out.back().second = hi;
        else
            out.emplace_back(lo, hi);
    }
    return out;
}

Intervals interval_union(const std::vector<Intervals>& regions) {
    Intervals all;
    for (const Intervals& r : regions) all.insert(all.end(), r.begin(), r.end());
    std::sort(all.begin(), all.end());
    Intervals out;
    for (const auto& [lo, hi] : all) {
        if (!out.empty() && lo <= out.back().second)
            out.back().second = std::max(out.back().second, hi);
        else
            out.emplace_back(lo, hi);
    }
    return out;
}

double interval_length(const Intervals& iv) {
    double len = 0.0;
    for (const auto& [lo, hi] : iv) len += hi - lo;
    return len;
}

double MarginLabeler::flip_rate(double x) const {
    double scaled = std::min(1.0, std::abs(x - boundary) / width);
    double certainty = (1.0 - 2.0 * eta_far) * std::pow(scaled, beta());
    return 0.5 * (1.0 - certainty);
}

Label MarginLabeler::base_label(double x) const {
    return x >= boundary ? Label::positive : Label::negative;
}

double MarginLabeler::certainty_mass(double a, double b) const {
    if (!(a < b)) return 0.0;
    double scale = 1.0 - 2.0 * eta_far;
    auto side = [&](double t) { return one_sided_certainty(t, scale, width, beta()); };
    if (b <= boundary) return side(boundary - a) - side(boundary - b);
    if (a >= boundary) return side(b - boundary) - side(a - boundary);
    return side(boundary - a) + side(b - boundary);
}

MarginLabeler tsybakov_labeler(double alpha, double boundary, double width,
                               double eta_far) {
    MarginLabeler m{boundary, alpha, width, eta_far};
    DataDistribution probe{Uniform01{}, m};
    validate_distribution(probe);
    return m;
}

std::size_t marginal_dimension(const Marginal& m) {
    if (std::holds_alternative<Uniform01>(m)) return 1;
    if (const auto* u = std::get_if<ProductUniform>(&m)) return u->dim;
    return require_pool(m).dimension();
}

void validate_distribution(const DataDistribution& dist) {
    if (const auto* u = std::get_if<ProductUniform>(&dist.marginal)) {
        if (u->dim == 0) throw ConfigError("product marginal needs dim >= 1");
    }
    if (const auto* p = std::get_if<PoolMarginal>(&dist.marginal)) {
        if (p->pool == nullptr || p->pool->size() == 0)
            throw ConfigError("pool marginal needs a non-empty pool");
    }
    if (const auto* f = std::get_if<FlipLabeler>(&dist.labeler)) {
        validate_rule(f->base);
        if (!(f->eta >= 0.0 && f->eta < 0.5))
            throw ConfigError("flip rate must lie in [0, 1/2)");
    }
    if (const auto* m = std::get_if<MarginLabeler>(&dist.labeler)) {
        if (!std::isfinite(m->boundary))
            throw ConfigError("margin boundary must be finite");
        if (!(m->alpha > 0.0 && m->alpha <= 1.0))
            throw ConfigError("margin exponent alpha must lie in (0, 1]");
        if (!(m->width > 0.0) || !std::isfinite(m->width))
            throw ConfigError("margin width must be positive and finite");
        if (!(m->eta_far >= 0.0 && m->eta_far < 0.5))
            throw ConfigError("far flip rate must lie in [0, 1/2)");
        if (marginal_dimension(dist.marginal) != 1)
            throw DimensionError("margin labeler needs a 1-D marginal");
    }
}

// --- stream ------------------------------------------------------------------

LabeledStream::LabeledStream(DataDistribution dist, std::uint64_t seed)
    : dist_(std::move(dist)),
      seed_(seed),
      point_rng_(substream_seed(seed, 1)),
      label_rng_(substream_seed(seed, 2)) {
    validate_distribution(dist_);
    flip_base_ = flip_base_of(dist_.labeler);
}

Point LabeledStream::point(std::uint64_t k) const {
    if (k == 0) throw Error("rounds are 1-based");
    if (std::holds_alternative<Uniform01>(dist_.marginal))
        return point1(point_rng_.uniform(k));
    if (const auto* u = std::get_if<ProductUniform>(&dist_.marginal)) {
        Point p;
        p.coords.reserve(u->dim);
        for (std::size_t j = 0; j < u->dim; ++j)
            p.coords.push_back(point_rng_.uniform((k - 1) * u->dim + 1 + j));
        return p;
    }
    const auto& pool = require_pool(dist_.marginal);
    auto idx = static_cast<std::size_t>(point_rng_.uniform(k) * static_cast<double>(pool.size()));
    if (idx >= pool.size()) idx = pool.size() - 1;
    return pool.at(idx);
}

Label LabeledStream::label(std::uint64_t k) const {
    if (k == 0) throw Error("rounds are 1-based");
    ++opens_;
    Point x = point(k);
    LabelStats st = stats_at(dist_.labeler, x, flip_base_);
    return label_rng_.uniform(k) < st.eta ? flipped(st.base) : st.base;
}

// --- exact quantities ----------------------------------------------------------

std::vector<std::pair<double, double>> plus_region(const Hypothesis& h) {
    return plus_region_rule(h.rule());
}

namespace {

double pool_true_error(const Hypothesis& h, const DataDistribution& dist) {
    const auto& pool = require_pool(dist.marginal);
    std::optional<Hypothesis> base = flip_base_of(dist.labeler);
    double total = 0.0;
    for (const Point& x : pool.points()) {
        LabelStats st = stats_at(dist.labeler, x, base);
        total += h(x) == st.base ? st.eta : 1.0 - st.eta;
    }
    return total / static_cast<double>(pool.size());
}

double uniform_true_error(const Hypothesis& h, const DataDistribution& dist) {
    Intervals hplus = plus_region(h);
    if (const auto* f = std::get_if<FlipLabeler>(&dist.labeler)) {
        Intervals bplus = plus_region_rule(f->base);
        double dis = interval_length(interval_symmetric_difference(hplus, bplus));
        return f->eta + (1.0 - 2.0 * f->eta) * dis;
    }
    const auto& m = std::get<MarginLabeler>(dist.labeler);
    Intervals bplus;
    append_clamped(bplus, m.boundary, 1.0);
    double flip_mass = 0.5 * (1.0 - m.certainty_mass(0.0, 1.0));
    double dis = 0.0;
    for (const auto& [lo, hi] : interval_symmetric_difference(hplus, bplus))
        dis += m.certainty_mass(lo, hi);
    return flip_mass + dis;
}

} // namespace

double true_error(const Hypothesis& h, const DataDistribution& dist) {
    validate_distribution(dist);
    if (std::holds_alternative<PoolMarginal>(dist.marginal))
        return pool_true_error(h, dist);
    if (std::holds_alternative<Uniform01>(dist.marginal))
        return uniform_true_error(h, dist);
    throw UnsupportedError("true_error: no closed form for this marginal; use true_error_mc");
}

double disagreement_mass(const Hypothesis& h, const Hypothesis& g,
                         const DataDistribution& dist) {
    validate_distribution(dist);
    if (std::holds_alternative<PoolMarginal>(dist.marginal)) {
        const auto& pool = require_pool(dist.marginal);
        std::size_t count = 0;
        for (const Point& x : pool.points())
            if (h(x) != g(x)) ++count;
        return static_cast<double>(count) / static_cast<double>(pool.size());
    }
    if (std::holds_alternative<Uniform01>(dist.marginal))
        return interval_length(interval_symmetric_difference(plus_region(h), plus_region(g)));
    throw UnsupportedError("disagreement_mass: no closed form for this marginal");
}

double true_error_mc(const Hypothesis& h, const DataDistribution& dist,
                     std::uint64_t samples, std::uint64_t seed) {
    if (samples == 0) throw ConfigError("true_error_mc needs samples >= 1");
    LabeledStream stream(dist, seed);
    std::uint64_t wrong = 0;
    for (std::uint64_t k = 1; k <= samples; ++k)
        if (h(stream.point(k)) != stream.label(k)) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(samples);
}

GroundTruth ground_truth(const HypothesisClass& cls, const DataDistribution& dist) {
    GroundTruth out{0, true_error(cls.at(0), dist)};
    for (std::size_t id = 1; id < cls.size(); ++id) {
        double e = true_error(cls.at(id), dist);
        if (e < out.err_star) {
            out.hstar_id = id;
            out.err_star = e;
        }
    }
    return out;
}

} // namespace iwal
