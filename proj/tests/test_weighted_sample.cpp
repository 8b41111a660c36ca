#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "iwal/error.hpp"
#include "iwal/weighted_sample.hpp"

using namespace iwal;

namespace {

WeightedSample sample_with(std::vector<WeightedExample> exs, std::uint64_t rounds) {
    WeightedSample s;
    std::size_t next = 0;
    for (std::uint64_t k = 1; k <= rounds; ++k) {
        if (next < exs.size() && exs[next].round == k) s.append(exs[next++]);
        s.advance_round();
    }
    return s;
}

} // namespace

TEST_CASE("weighted error divides by rounds, never by stored examples") {
    // two queried rounds out of ten, weights 2 and 3
    WeightedSample s = sample_with({{2, point1(0.3), Label::negative, 2.0},
                                    {7, point1(0.8), Label::negative, 3.0}},
                                   10);
    CHECK(s.round_count() == 10);
    CHECK(s.query_count() == 2);

    Hypothesis all_plus(0, ThresholdRule{0.0, +1}); // wrong on both
    CHECK(weighted_error(all_plus, s) == doctest::Approx(0.5));
    CHECK(weighted_error_total(all_plus, s) == doctest::Approx(5.0));

    Hypothesis all_minus(1, ThresholdRule{0.0, -1}); // wrong on neither
    CHECK(weighted_error(all_minus, s) == 0.0);
}

TEST_CASE("weighted error can exceed 1 when heavy examples pile up") {
    WeightedSample s = sample_with({{1, point1(0.5), Label::negative, 5.0}}, 2);
    Hypothesis wrong(0, ThresholdRule{0.0, +1});
    CHECK(weighted_error(wrong, s) == doctest::Approx(2.5));
}

TEST_CASE("empty sample has zero error for every hypothesis") {
    WeightedSample s;
    Hypothesis h(0, ThresholdRule{0.5, +1});
    CHECK(weighted_error(h, s) == 0.0);
    s.advance_round();
    CHECK(weighted_error(h, s) == 0.0); // unqueried rounds keep totals at 0
}

TEST_CASE("append rejects protocol violations") {
    WeightedSample s;
    CHECK_THROWS(s.append({1, point1(0.5), Label::positive, 0.0}));  // weight 0
    CHECK_THROWS(s.append({1, point1(0.5), Label::positive, -1.0})); // negative
    CHECK_THROWS(s.append({1, point1(0.5), Label::positive, 0.5}));  // below 1/P floor
    CHECK_THROWS(s.append({0, point1(0.5), Label::positive, 1.0}));  // round 0
    CHECK_THROWS(s.append({2, point1(0.5), Label::positive, 1.0}));  // future round

    s.append({1, point1(0.5), Label::positive, 1.0});
    s.advance_round();
    CHECK_THROWS(s.append({1, point1(0.6), Label::positive, 1.0})); // round reuse
    s.advance_round();
    s.append({3, point1(0.6), Label::positive, 1.0}); // current round is fine
    s.advance_round();
    CHECK(s.round_count() == 3);
    CHECK(s.query_count() == 2);
}

TEST_CASE("interaction records carry a label exactly when queried") {
    CHECK_NOTHROW(validate_record({point1(0.1), 0.5, true, Label::positive}));
    CHECK_NOTHROW(validate_record({point1(0.1), 0.5, false, std::nullopt}));
    CHECK_THROWS(validate_record({point1(0.1), 0.5, true, std::nullopt}));
    CHECK_THROWS(validate_record({point1(0.1), 0.5, false, Label::positive}));
    CHECK_THROWS(validate_record({point1(0.1), 0.0, false, std::nullopt}));
    CHECK_THROWS(validate_record({point1(0.1), 1.5, false, std::nullopt}));
}

TEST_CASE("weighted mean is the importance-weighted average over all rounds") {
    std::vector<InteractionRecord> records{
        {point1(0.1), 0.5, true, Label::positive},  // weight 2
        {point1(0.2), 1.0, false, std::nullopt},    // skipped, still a round
        {point1(0.3), 0.25, true, Label::negative}, // weight 4
        {point1(0.4), 1.0, true, Label::negative},  // weight 1
    };
    // f = 1[y == +1]: (2*1 + 0 + 4*0 + 1*0)/4
    double mean = weighted_mean(
        [](const Point&, Label y) { return y == Label::positive ? 1.0 : 0.0; }, records);
    CHECK(mean == doctest::Approx(0.5));

    // unqueried records never touch y
    double touched = weighted_mean(
        [](const Point&, Label) { return 1.0; }, records);
    CHECK(touched == doctest::Approx((2.0 + 4.0 + 1.0) / 4.0));

    CHECK(weighted_mean([](const Point&, Label) { return 1.0; },
                        std::vector<InteractionRecord>{}) == 0.0);
}

TEST_CASE("csv export is stable and complete") {
    WeightedSample s = sample_with({{1, point1(0.25), Label::positive, 1.0},
                                    {3, point1(0.75), Label::negative, 2.5}},
                                   3);
    std::ostringstream out;
    write_sample_csv(s, out);
    CHECK(out.str() == "round,x0,y,weight\n1,0.25,1,1\n3,0.75,-1,2.5\n");
}
