#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <thread>

#include "oracles.hpp"
#include "ttm/error.hpp"
#include "ttm/session.hpp"
#include "ttm/session_store.hpp"

using namespace ttm;
namespace fs = std::filesystem;

namespace {

Session example_session() {
    auto s = start_session(ObjectSet::numbered(4), PairingPolicy::sequential, {}, "example",
                           "2026-01-01T00:00:00Z");
    s = submit_match(s, s.tournament.pending[0].pairing_id, 0, 1);
    s = submit_match(s, s.tournament.pending[1].pairing_id, 2, 0);
    s = submit_match(s, s.tournament.pending[0].pairing_id, 0, 3);
    return s;
}

std::string golden_results() {
    std::ifstream in(TTM_TEST_DATA "/example_results.json");
    return {std::istreambuf_iterator<char>(in), {}};
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected ttm::Error");
    return ErrorCode::io;
}

fs::path scratch_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("ttm-unit-" + name + "-" + new_session_id());
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("phase transitions") {
    CHECK(transition_allowed(Phase::setup, Phase::eliciting));
    CHECK(transition_allowed(Phase::eliciting, Phase::results));
    CHECK(transition_allowed(Phase::results, Phase::revising));
    CHECK(transition_allowed(Phase::revising, Phase::results));
    CHECK(transition_allowed(Phase::results, Phase::closed));
    CHECK_FALSE(transition_allowed(Phase::eliciting, Phase::closed));
    CHECK_FALSE(transition_allowed(Phase::closed, Phase::revising));
    CHECK_FALSE(transition_allowed(Phase::results, Phase::eliciting));
    CHECK(phase_from_string("revising") == Phase::revising);
    CHECK_THROWS_AS(phase_from_string("done"), Error);
}

TEST_CASE("session ids and timestamps") {
    const auto a = new_session_id();
    CHECK(a.size() == 32);
    CHECK(a.find_first_not_of("0123456789abcdef") == std::string::npos);
    CHECK(a != new_session_id());
    const auto t = utc_timestamp();
    CHECK(t.size() == 20);
    CHECK(t.back() == 'Z');
}

TEST_CASE("lifecycle of the worked example") {
    auto s = start_session(ObjectSet::numbered(4), PairingPolicy::sequential, {}, "x", "t");
    CHECK(s.phase == Phase::eliciting);
    CHECK_FALSE(s.matrix.has_value());
    CHECK(code_of([&] { accept(s); }) == ErrorCode::conflict);
    CHECK(code_of([&] { revise_cards(s, 0, 1); }) == ErrorCode::conflict);

    s = example_session();
    CHECK(s.phase == Phase::results);
    REQUIRE(s.matrix);
    CHECK(s.matrix->rows() == test::kExampleMatrix);
    CHECK(canonical_dump(tournament_results(s)) == golden_results());
    CHECK(canonical_dump(export_results(s)) == golden_results());
    CHECK(code_of([&] { submit_match(s, 0, 0, 0); }) == ErrorCode::conflict);

    auto revised = revise_cards(s, 2, 2);
    CHECK(revised.phase == Phase::revising);
    CHECK(export_results(revised)["u"] == nlohmann::json{7, 5, 3, 0});
    CHECK(canonical_dump(tournament_results(revised)) == golden_results());
    revised = revise_ranking(revised, {1, 0, 2, 3});
    CHECK(export_results(revised)["ranking"][0][0] == "a2");

    const auto closed = accept(revised);
    CHECK(closed.phase == Phase::closed);
    CHECK(code_of([&] { revise_cards(closed, 0, 1); }) == ErrorCode::conflict);
    CHECK(code_of([&] { accept(closed); }) == ErrorCode::conflict);
    CHECK(accept(s).phase == Phase::closed);
}

TEST_CASE("explicit sessions wait for pairings") {
    auto s = start_session(ObjectSet::numbered(3), PairingPolicy::explicit_pairs, {}, "x", "t");
    CHECK(s.tournament.awaiting_pairings());
    s = submit_pairings(s, {{2, 0}, {1, std::nullopt}});
    s = submit_match(s, s.tournament.pending[0].pairing_id, 2, 0);
    CHECK(s.tournament.round == 2);
    CHECK(s.tournament.awaiting_pairings());
    s = submit_pairings(s, {{1, 2}});
    s = submit_match(s, s.tournament.pending[0].pairing_id, 2, 4);
    CHECK(s.phase == Phase::results);
    // b is worst, 5 units below c; a sits 1 below c
    CHECK(s.scale->u == std::vector<Units>{4, 0, 5});
}

TEST_CASE("session document round trip at every step") {
    auto s = start_session(ObjectSet({"tea", "coffee, black", "juice"}), PairingPolicy::sequential,
                           {}, "rt", "2026-01-01T00:00:00Z");
    CHECK(load_session(save_session(s)) == s);
    s = submit_match(s, s.tournament.pending[0].pairing_id, 1, 3);
    CHECK(load_session(save_session(s)) == s);
    s = submit_match(s, s.tournament.pending[0].pairing_id, 2, 0);
    CHECK(load_session(save_session(s)) == s);
    s = revise_cards(s, 0, 5);
    CHECK(load_session(save_session(s)) == s);
    s = accept(s);
    const auto doc = save_session(s);
    CHECK(load_session(doc) == s);
    CHECK(canonical_dump(save_session(load_session(doc))) == canonical_dump(doc));
}

TEST_CASE("schema errors name the offending field") {
    const auto doc = save_session(example_session());
    auto expect_field = [](nlohmann::json d, const std::string& needle) {
        try {
            load_session(d);
            FAIL("expected schema error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::schema);
            CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
        }
    };
    auto d = doc;
    d.erase("phase");
    expect_field(d, "phase");
    d = doc;
    d["phase"] = "finished";
    expect_field(d, "phase");
    d = doc;
    d["tournament"]["history"][1].erase("winner");
    expect_field(d, "/tournament/history/1/winner");
    d = doc;
    d.erase("matrix");
    expect_field(d, "matrix");
    d = doc;
    d["version"] = "three";
    expect_field(d, "version");
    CHECK(code_of([] { load_session(nlohmann::json::array()); }) == ErrorCode::schema);
}

TEST_CASE("match matrix import") {
    std::ifstream in(TTM_TEST_DATA "/example_L.csv");
    const std::string csv((std::istreambuf_iterator<char>(in)), {});
    const auto [objects, l] = import_match_matrix(csv);
    CHECK(objects.names() == std::vector<std::string>{"a1", "a2", "a3", "a4"});
    CHECK(l == test::example_match_matrix());

    const auto pinned = ObjectSet({"a4", "a3", "a2", "a1"});
    CHECK(import_match_matrix(csv, pinned).second.champion() == 3);

    CHECK(code_of([&] { import_match_matrix(csv, ObjectSet({"a1", "a2", "a3", "b"})); }) ==
          ErrorCode::not_found);
    CHECK(code_of([] { import_match_matrix("a1,a2,2\na3,a4,1\na1,a3,4\n"); }) ==
          ErrorCode::structural);
    try {
        import_match_matrix("a1,a2,2\na2,a3,1\na1,a4,4\na1,a1,0\n", {}, "L.csv");
        FAIL("expected structural error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::structural);
        CHECK(std::string(e.what()).find("L.csv") != std::string::npos);
    }
    try {
        import_match_matrix("a1,a2,2\na3,a4,x\na1,a3,4\na1,a1,0\n", {}, "L.csv");
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::parse);
        CHECK(std::string(e.what()).find("L.csv:2") != std::string::npos);
    }
    CHECK(import_match_matrix("\"x,1\",y,1\n\"x,1\",\"x,1\",0\n").first.name(0) == "x,1");
}

TEST_CASE("file store: versions, conflicts and atomic files") {
    const auto dir = scratch_dir("store");
    FileSessionStore store(dir);
    const auto created = store.save(example_session());
    CHECK(created.version == 1);
    CHECK(fs::exists(store.path_for("example")));
    const auto text = read_file(store.path_for("example"));
    CHECK(text.find('\n') == std::string::npos);
    CHECK(*store.load("example") == created);
    CHECK_FALSE(store.load("missing").has_value());
    CHECK(code_of([&] { store.load("../etc/passwd"); }) == ErrorCode::not_found);

    const auto updated = store.update("example", [](const Session& s) { return revise_cards(s, 0, 3); });
    CHECK(updated.version == 2);
    CHECK(code_of([&] { store.save(created); }) == ErrorCode::version_conflict);
    CHECK(code_of([&] { store.update("missing", [](const Session& s) { return s; }); }) ==
          ErrorCode::not_found);
    fs::remove_all(dir);
}

TEST_CASE("concurrent updates are serialized") {
    MemorySessionStore store;
    store.save(start_session(ObjectSet::numbered(2), PairingPolicy::sequential, {}, "c", "t"));
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&] {
            for (int i = 0; i < 25; ++i) {
                store.update("c", [](const Session& s) { return s; });
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    CHECK(store.load("c")->version == 201);
}
