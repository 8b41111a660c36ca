#include "iwal/hypothesis.hpp"

#include <cmath>
#include <sstream>

namespace iwal {

Point point1(double x) { return Point{{x}}; }

void validate_point(const Point& p) {
    if (p.coords.empty()) throw DimensionError("point has no coordinates");
    for (double c : p.coords) {
        if (!std::isfinite(c)) throw Error("point coordinate is not finite");
    }
}

bool operator==(const Point& a, const Point& b) { return a.coords == b.coords; }

Label label_from_int(int v) {
    if (v == -1) return Label::negative;
    if (v == +1) return Label::positive;
    throw Error("label must be -1 or +1, got " + std::to_string(v));
}

PointPool::PointPool(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.empty()) throw Error("point pool is empty");
    dim_ = points_.front().coords.size();
    for (std::size_t i = 0; i < points_.size(); ++i) {
        validate_point(points_[i]);
        if (points_[i].coords.size() != dim_)
            throw DimensionError("pool points have mixed dimensions");
        auto [it, inserted] = index_.emplace(points_[i].coords, i);
        if (!inserted) throw Error("pool contains a duplicate point");
    }
}

std::size_t PointPool::index_of(const Point& p) const {
    if (p.coords.size() != dim_)
        throw DimensionError("point dimension does not match pool");
    auto it = index_.find(p.coords);
    if (it == index_.end()) throw Error("point is not a pool member");
    return it->second;
}

namespace {

void require_orientation(int o) {
    if (o != -1 && o != +1) throw Error("orientation must be -1 or +1");
}

double coord1(const Point& x) {
    if (x.coords.size() != 1)
        throw DimensionError("1-D hypothesis evaluated on a point of dimension " +
                             std::to_string(x.coords.size()));
    return x.coords[0];
}

struct EvalVisitor {
    const Point& x;

    Label operator()(const ThresholdRule& r) const {
        const bool above = coord1(x) >= r.t; // boundary point counts as >=
        return (above == (r.orientation == +1)) ? Label::positive : Label::negative;
    }
    Label operator()(const IntervalRule& r) const {
        const double v = coord1(x);
        return (r.lo <= v && v <= r.hi) ? Label::positive : Label::negative;
    }
    Label operator()(const StumpRule& r) const {
        if (r.axis >= x.coords.size())
            throw DimensionError("stump axis " + std::to_string(r.axis) +
                                 " out of range for dimension " +
                                 std::to_string(x.coords.size()));
        const bool above = x.coords[r.axis] >= r.t;
        return (above == (r.orientation == +1)) ? Label::positive : Label::negative;
    }
    Label operator()(const TruthTableRule& r) const {
        return r.table[r.pool->index_of(x)];
    }
};

} // namespace

void validate_rule(const HypothesisRule& rule) {
    if (const auto* t = std::get_if<ThresholdRule>(&rule)) {
        if (!std::isfinite(t->t)) throw Error("threshold is not finite");
        require_orientation(t->orientation);
    } else if (const auto* iv = std::get_if<IntervalRule>(&rule)) {
        if (!std::isfinite(iv->lo) || !std::isfinite(iv->hi) || iv->lo > iv->hi)
            throw Error("interval requires finite lo <= hi");
    } else if (const auto* s = std::get_if<StumpRule>(&rule)) {
        if (!std::isfinite(s->t)) throw Error("stump threshold is not finite");
        require_orientation(s->orientation);
    } else {
        const auto& tt = std::get<TruthTableRule>(rule);
        if (!tt.pool) throw Error("truth table has no pool");
        if (tt.table.size() != tt.pool->size())
            throw Error("truth table size does not match pool size");
    }
}

Hypothesis::Hypothesis(std::size_t id, HypothesisRule rule)
    : id_(id), rule_(std::move(rule)) {
    validate_rule(rule_);
}

Label Hypothesis::operator()(const Point& x) const {
    return std::visit(EvalVisitor{x}, rule_);
}

Label evaluate(const Hypothesis& h, const Point& x) { return h(x); }

HypothesisClass::HypothesisClass(std::vector<HypothesisRule> rules) {
    if (rules.empty()) throw Error("hypothesis class is empty");
    members_.reserve(rules.size());
    for (std::size_t i = 0; i < rules.size(); ++i)
        members_.emplace_back(i, std::move(rules[i]));
}

const Hypothesis& HypothesisClass::at(std::size_t id) const {
    if (id >= members_.size()) throw Error("hypothesis id out of range");
    return members_[id];
}

HypothesisClass threshold_grid(std::size_t count, double lo, double hi, int orientation) {
    if (count < 1) throw Error("threshold grid needs at least one element");
    if (!(lo <= hi)) throw Error("threshold grid requires lo <= hi");
    require_orientation(orientation);
    std::vector<HypothesisRule> rules;
    rules.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double t = count == 1 ? lo
                                    : lo + (hi - lo) * static_cast<double>(j) /
                                               static_cast<double>(count - 1);
        rules.push_back(ThresholdRule{t, orientation});
    }
    return HypothesisClass(std::move(rules));
}

namespace {

nlohmann::json points_to_json(const PointPool& pool) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : pool.points()) arr.push_back(p.coords);
    return arr;
}

std::shared_ptr<const PointPool> points_from_json(const nlohmann::json& arr) {
    std::vector<Point> pts;
    for (const auto& row : arr) pts.push_back(Point{row.get<std::vector<double>>()});
    return std::make_shared<const PointPool>(std::move(pts));
}

// exact key set: extras and omissions both reject
void require_keys(const nlohmann::json& j, std::initializer_list<const char*> keys) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : keys)
            if (item.key() == k) { known = true; break; }
        if (!known) throw Error("unknown key in hypothesis json: " + item.key());
    }
    for (const char* k : keys)
        if (!j.contains(k)) throw Error(std::string("hypothesis json missing key: ") + k);
}

} // namespace

nlohmann::json rule_to_json(const HypothesisRule& rule) {
    nlohmann::json j;
    if (const auto* t = std::get_if<ThresholdRule>(&rule)) {
        j["form"] = "threshold";
        j["t"] = t->t;
        j["orientation"] = t->orientation;
    } else if (const auto* iv = std::get_if<IntervalRule>(&rule)) {
        j["form"] = "interval";
        j["lo"] = iv->lo;
        j["hi"] = iv->hi;
    } else if (const auto* s = std::get_if<StumpRule>(&rule)) {
        j["form"] = "stump";
        j["axis"] = s->axis;
        j["t"] = s->t;
        j["orientation"] = s->orientation;
    } else {
        const auto& tt = std::get<TruthTableRule>(rule);
        j["form"] = "truth_table";
        j["points"] = points_to_json(*tt.pool);
        nlohmann::json labels = nlohmann::json::array();
        for (Label y : tt.table) labels.push_back(to_int(y));
        j["labels"] = labels;
    }
    return j;
}

HypothesisRule rule_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("form"))
        throw Error("hypothesis json must be an object with a form tag");
    const std::string form = j.at("form").get<std::string>();
    HypothesisRule rule;
    if (form == "threshold") {
        require_keys(j, {"form", "t", "orientation"});
        rule = ThresholdRule{j.at("t").get<double>(), j.at("orientation").get<int>()};
    } else if (form == "interval") {
        require_keys(j, {"form", "lo", "hi"});
        rule = IntervalRule{j.at("lo").get<double>(), j.at("hi").get<double>()};
    } else if (form == "stump") {
        require_keys(j, {"form", "axis", "t", "orientation"});
        rule = StumpRule{j.at("axis").get<std::size_t>(), j.at("t").get<double>(),
                         j.at("orientation").get<int>()};
    } else if (form == "truth_table") {
        require_keys(j, {"form", "points", "labels"});
        TruthTableRule tt;
        tt.pool = points_from_json(j.at("points"));
        for (const auto& v : j.at("labels")) tt.table.push_back(label_from_int(v.get<int>()));
        rule = std::move(tt);
    } else {
        throw Error("unknown hypothesis form: " + form);
    }
    validate_rule(rule);
    return rule;
}

nlohmann::json class_to_json(const HypothesisClass& cls) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& h : cls) arr.push_back(rule_to_json(h.rule()));
    return nlohmann::json{{"hypotheses", arr}};
}

HypothesisClass class_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("hypotheses"))
        throw Error("hypothesis class json must contain a hypotheses array");
    require_keys(j, {"hypotheses"});
    std::vector<HypothesisRule> rules;
    for (const auto& hj : j.at("hypotheses")) rules.push_back(rule_from_json(hj));
    return HypothesisClass(std::move(rules));
}

} // namespace iwal
