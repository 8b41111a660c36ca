#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "iwal/error.hpp"
#include "iwal/hypothesis.hpp"

using namespace iwal;

TEST_CASE("threshold predicts by side, boundary counts as the positive side") {
    Hypothesis up(0, ThresholdRule{0.5, +1});
    CHECK(up(point1(0.5)) == Label::positive);
    CHECK(up(point1(0.7)) == Label::positive);
    CHECK(up(point1(0.49)) == Label::negative);

    Hypothesis down(1, ThresholdRule{0.5, -1});
    CHECK(down(point1(0.49)) == Label::positive);
    CHECK(down(point1(0.5)) == Label::negative);
}

TEST_CASE("interval is closed on both ends") {
    Hypothesis h(0, IntervalRule{0.2, 0.4});
    CHECK(h(point1(0.2)) == Label::positive);
    CHECK(h(point1(0.3)) == Label::positive);
    CHECK(h(point1(0.4)) == Label::positive);
    CHECK(h(point1(0.1999)) == Label::negative);
    CHECK(h(point1(0.5)) == Label::negative);
}

TEST_CASE("stump reads one axis of a multi-dim point") {
    Hypothesis h(0, StumpRule{1, 0.5, +1});
    CHECK(h({{0.0, 0.9}}) == Label::positive);
    CHECK(h({{0.9, 0.0}}) == Label::negative);
    CHECK_THROWS_AS(h(point1(0.9)), DimensionError); // axis 1 needs dim >= 2
}

TEST_CASE("1-D forms reject points of the wrong dimension") {
    Hypothesis h(0, ThresholdRule{0.5, +1});
    CHECK_THROWS_AS(h({{0.1, 0.2}}), DimensionError);
    Hypothesis iv(1, IntervalRule{0.1, 0.9});
    CHECK_THROWS_AS(iv({{0.1, 0.2}}), DimensionError);
}

TEST_CASE("truth table answers on pool members only") {
    auto pool = std::make_shared<PointPool>(std::vector<Point>{point1(0.1), point1(0.9)});
    Hypothesis h(0, TruthTableRule{pool, {Label::positive, Label::negative}});
    CHECK(h(point1(0.1)) == Label::positive);
    CHECK(h(point1(0.9)) == Label::negative);
    CHECK_THROWS(h(point1(0.5)));
}

TEST_CASE("malformed rules are rejected at construction") {
    CHECK_THROWS(Hypothesis(0, ThresholdRule{0.5, 0}));  // orientation must be +-1
    CHECK_THROWS(Hypothesis(0, IntervalRule{0.4, 0.2})); // lo > hi
    auto pool = std::make_shared<PointPool>(std::vector<Point>{point1(0.1)});
    CHECK_THROWS(Hypothesis(0, TruthTableRule{pool, {}}));    // size mismatch
    CHECK_THROWS(Hypothesis(0, TruthTableRule{nullptr, {}})); // missing pool
}

TEST_CASE("point pool validates uniform dimension and uniqueness") {
    CHECK_THROWS(PointPool({}));
    CHECK_THROWS(PointPool({point1(0.1), point1(0.1)}));
    CHECK_THROWS(PointPool({point1(0.1), {{0.1, 0.2}}}));

    PointPool pool({point1(0.3), point1(0.7)});
    CHECK(pool.size() == 2);
    CHECK(pool.dimension() == 1);
    CHECK(pool.index_of(point1(0.7)) == 1);
    CHECK_THROWS(pool.index_of(point1(0.5)));
}

TEST_CASE("labels are exactly the two signs") {
    CHECK(label_from_int(+1) == Label::positive);
    CHECK(label_from_int(-1) == Label::negative);
    CHECK_THROWS(label_from_int(0));
    CHECK(flipped(Label::positive) == Label::negative);
    CHECK(to_int(Label::negative) == -1);
}

TEST_CASE("class ids are positions in declaration order") {
    HypothesisClass cls({ThresholdRule{0.2, +1}, ThresholdRule{0.8, +1}});
    CHECK(cls.size() == 2);
    CHECK(cls.at(0).id() == 0);
    CHECK(cls.at(1).id() == 1);
    CHECK_THROWS(cls.at(2));
    CHECK_THROWS(HypothesisClass({}));
}

TEST_CASE("threshold grid spans [lo, hi] inclusive, evenly") {
    HypothesisClass cls = threshold_grid(3, 0.0, 1.0);
    auto t_of = [&](std::size_t id) { return std::get<ThresholdRule>(cls.at(id).rule()).t; };
    CHECK(t_of(0) == 0.0);
    CHECK(t_of(1) == 0.5);
    CHECK(t_of(2) == 1.0);

    HypothesisClass single = threshold_grid(1, 0.25, 0.75);
    CHECK(std::get<ThresholdRule>(single.at(0).rule()).t == 0.25);
}

TEST_CASE("rules survive a JSON round trip") {
    auto pool = std::make_shared<PointPool>(std::vector<Point>{point1(0.1), point1(0.9)});
    std::vector<HypothesisRule> rules{
        ThresholdRule{0.25, -1},
        IntervalRule{0.1, 0.6},
        StumpRule{2, 0.5, +1},
        TruthTableRule{pool, {Label::negative, Label::positive}},
    };
    for (const auto& rule : rules) {
        HypothesisRule back = rule_from_json(rule_to_json(rule));
        CHECK(rule_to_json(back) == rule_to_json(rule));
    }
}

TEST_CASE("class JSON round trip preserves order") {
    HypothesisClass cls = threshold_grid(5, 0.0, 1.0, -1);
    HypothesisClass back = class_from_json(class_to_json(cls));
    REQUIRE(back.size() == cls.size());
    for (std::size_t id = 0; id < cls.size(); ++id)
        CHECK(rule_to_json(back.at(id).rule()) == rule_to_json(cls.at(id).rule()));
}

TEST_CASE("unknown JSON keys are rejected") {
    nlohmann::json j{{"form", "threshold"}, {"t", 0.5}, {"orientation", 1}, {"extra", 1}};
    CHECK_THROWS(rule_from_json(j));
    nlohmann::json missing{{"form", "threshold"}, {"t", 0.5}};
    CHECK_THROWS(rule_from_json(missing));
    nlohmann::json unknown{{"form", "circle"}, {"r", 1.0}};
    CHECK_THROWS(rule_from_json(unknown));
}
