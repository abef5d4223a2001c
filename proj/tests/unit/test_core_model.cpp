#include "doctest.h"

#include "oracles.hpp"
#include "ttm/core_model.hpp"
#include "ttm/error.hpp"

using namespace ttm;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected ttm::Error");
    return ErrorCode::io;
}

} // namespace

TEST_CASE("object set validation") {
    CHECK(ObjectSet({"x", "y"}).size() == 2);
    CHECK(code_of([] { ObjectSet({"x"}); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { ObjectSet({"x", "x"}); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { ObjectSet({"x", ""}); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { ObjectSet({"x", "a\nb"}); }) == ErrorCode::invalid_argument);

    const auto s = ObjectSet::numbered(3);
    CHECK(s.names() == std::vector<std::string>{"a1", "a2", "a3"});
    CHECK(s.id_of("a3") == 2);
    CHECK_FALSE(s.find("a4").has_value());
    CHECK(code_of([&] { s.id_of("a4"); }) == ErrorCode::not_found);
}

TEST_CASE("card cap") {
    ElicitationConfig c;
    CHECK_NOTHROW(c.check_cards(0));
    CHECK_NOTHROW(c.check_cards(100));
    CHECK(code_of([&] { c.check_cards(101); }) == ErrorCode::invalid_argument);
    CHECK(code_of([&] { c.check_cards(-1); }) == ErrorCode::invalid_argument);
    c.card_cap.reset();
    CHECK_NOTHROW(c.check_cards(1'000'000));
}

TEST_CASE("reciprocity and consistency of the worked example") {
    const auto m = PreferenceMatrix::from_rows(test::kExampleMatrix);
    CHECK(check_reciprocity(m));
    const auto r = check_consistency(m);
    CHECK(r.reciprocal);
    CHECK(r.consistent);
    CHECK(r.violations.empty());
}

TEST_CASE("inconsistent 3x3 reports the violating triple") {
    const auto m = PreferenceMatrix::from_rows({{0, 1, 5}, {-1, 0, 1}, {-5, -1, 0}});
    const auto r = check_consistency(m);
    CHECK(r.reciprocal);
    CHECK_FALSE(r.consistent);
    // 0 -> 1 -> 2 adds up to 2, but the direct entry says 5.
    const Violation expected{0, 2, 1, -3};
    CHECK(std::find(r.violations.begin(), r.violations.end(), expected) != r.violations.end());
    for (const auto& v : r.violations) {
        CHECK(v.residual == m.at(v.i, v.k) + m.at(v.k, v.j) - m.at(v.i, v.j));
        CHECK(v.residual != 0);
    }
}

TEST_CASE("non-reciprocal matrix stops before consistency") {
    const auto m = PreferenceMatrix::from_rows({{0, 1}, {1, 0}});
    const auto r = check_consistency(m);
    CHECK_FALSE(r.reciprocal);
    CHECK_FALSE(r.consistent);
    CHECK(r.violations.empty());
}

TEST_CASE("non-square rows are structural") {
    CHECK(code_of([] { PreferenceMatrix::from_rows({{0, 1}, {0}}); }) == ErrorCode::structural);
}

TEST_CASE("overflow-checked addition") {
    CHECK(add_units(2, 3) == 5);
    CHECK(code_of([] { add_units(INT64_MAX, 1); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { add_units(INT64_MIN, -1); }) == ErrorCode::invalid_argument);
}

TEST_CASE("csv round trip and diagnostics") {
    const auto m = PreferenceMatrix::from_rows(test::kExampleMatrix);
    const auto text = to_csv(m);
    CHECK(text == "0,2,4,5\n-2,0,2,3\n-4,-2,0,1\n-5,-3,-1,0\n");
    CHECK(preference_matrix_from_csv(text) == m);
    CHECK(preference_matrix_from_csv(" 0 , 1\n\n-1,0\n") ==
          PreferenceMatrix::from_rows({{0, 1}, {-1, 0}}));

    try {
        preference_matrix_from_csv("0,1\n-1,x\n", "M.csv");
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::parse);
        CHECK(std::string(e.what()).find("M.csv:2") != std::string::npos);
    }
    CHECK_THROWS_AS(preference_matrix_from_csv("0,1\n-1\n"), Error);
}

TEST_CASE("json round trip") {
    const auto m = PreferenceMatrix::from_rows(test::kExampleMatrix);
    const auto doc = to_json(m);
    CHECK(doc["m"] == 4);
    CHECK(doc["entries"][0][3] == 5);
    CHECK(preference_matrix_from_json(doc) == m);
}

TEST_CASE("match matrix validation") {
    CHECK_NOTHROW(test::example_match_matrix().validate());
    CHECK(test::example_match_matrix().champion() == 0);

    auto missing_convention = test::example_match_matrix();
    missing_convention.rows.pop_back();
    CHECK(code_of([&] { missing_convention.validate(); }) == ErrorCode::structural);

    auto champion_lost = test::example_match_matrix();
    champion_lost.rows[0] = {1, 0, 2};
    CHECK(code_of([&] { champion_lost.validate(); }) == ErrorCode::structural);

    auto self_match = test::example_match_matrix();
    self_match.rows[1] = {2, 2, 1};
    CHECK(code_of([&] { self_match.validate(); }) == ErrorCode::structural);

    auto out_of_range = test::example_match_matrix();
    out_of_range.rows[1] = {2, 7, 1};
    CHECK(code_of([&] { out_of_range.validate(); }) == ErrorCode::structural);

    auto eliminated_plays = MatchMatrix{{{0, 1, 1}, {1, 2, 1}, {0, 3, 1}, {0, 0, 0}}};
    CHECK(code_of([&] { eliminated_plays.validate(); }) == ErrorCode::structural);
}
