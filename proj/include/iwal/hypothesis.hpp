#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <variant>
#include <vector>

#include <json.hpp>

#include "iwal/error.hpp"

namespace iwal {

// Feature vector. Coordinates must be finite; d is small and fixed per stream.
struct Point {
    std::vector<double> coords;
};

Point point1(double x); // 1-D convenience
void validate_point(const Point& p);
bool operator==(const Point& a, const Point& b);

enum class Label : int {
    negative = -1,
    positive = +1,
};

inline int to_int(Label y) { return static_cast<int>(y); }
Label label_from_int(int v); // throws unless v is -1 or +1
inline Label flipped(Label y) { return y == Label::positive ? Label::negative : Label::positive; }

// Finite point pool backing truth-table hypotheses and finite-support
// marginals. Lookup is exact-match on coordinates.
class PointPool {
public:
    explicit PointPool(std::vector<Point> points);

    std::size_t size() const { return points_.size(); }
    const Point& at(std::size_t i) const { return points_.at(i); }
    const std::vector<Point>& points() const { return points_; }
    std::size_t dimension() const { return dim_; }

    // Throws DimensionError / Error when the point is not a pool member.
    std::size_t index_of(const Point& p) const;

private:
    std::vector<Point> points_;
    std::map<std::vector<double>, std::size_t> index_;
    std::size_t dim_ = 0;
};

// --- hypothesis forms ----------------------------------------------------
//
// Every form is a deterministic total map from its domain to {-1, +1}.

// 1-D: predicts +1 iff x >= t (orientation +1) or x < t (orientation -1).
struct ThresholdRule {
    double t = 0.0;
    int orientation = +1;
};

// 1-D: predicts +1 iff lo <= x <= hi.
struct IntervalRule {
    double lo = 0.0;
    double hi = 0.0;
};

// Axis-aligned stump: ThresholdRule applied to one coordinate of a d-dim point.
struct StumpRule {
    std::size_t axis = 0;
    double t = 0.0;
    int orientation = +1;
};

// Explicit labels over a finite pool; the domain is exactly the pool.
struct TruthTableRule {
    std::shared_ptr<const PointPool> pool;
    std::vector<Label> table;
};

using HypothesisRule = std::variant<ThresholdRule, IntervalRule, StumpRule, TruthTableRule>;

void validate_rule(const HypothesisRule& rule);

// A rule plus its id. Ids index into the owning class; a standalone
// hypothesis keeps the id it was assigned there.
class Hypothesis {
public:
    Hypothesis(std::size_t id, HypothesisRule rule);

    std::size_t id() const { return id_; }
    const HypothesisRule& rule() const { return rule_; }

    Label operator()(const Point& x) const;

private:
    std::size_t id_;
    HypothesisRule rule_;
};

Label evaluate(const Hypothesis& h, const Point& x);

// Finite hypothesis class with stable iteration order; ids are positions.
class HypothesisClass {
public:
    explicit HypothesisClass(std::vector<HypothesisRule> rules);

    std::size_t size() const { return members_.size(); }
    const Hypothesis& at(std::size_t id) const;
    const std::vector<Hypothesis>& members() const { return members_; }

    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

private:
    std::vector<Hypothesis> members_;
};

// count thresholds evenly spaced over [lo, hi], shared orientation.
HypothesisClass threshold_grid(std::size_t count, double lo, double hi, int orientation = +1);

// --- serialization --------------------------------------------------------
//
// Form tag plus parameters, e.g. {"form":"threshold","t":0.5,"orientation":1}.
// Truth tables embed their pool: {"form":"truth_table","points":[...],"labels":[...]}.

nlohmann::json rule_to_json(const HypothesisRule& rule);
HypothesisRule rule_from_json(const nlohmann::json& j);

nlohmann::json class_to_json(const HypothesisClass& cls);
HypothesisClass class_from_json(const nlohmann::json& j);

} // namespace iwal
