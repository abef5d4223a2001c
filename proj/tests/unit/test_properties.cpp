// Randomized invariants. Every generator is seeded so failures reproduce.

#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "ttm/matrix_builder.hpp"
#include "ttm/revision.hpp"
#include "ttm/session.hpp"

using namespace ttm;

namespace {

std::vector<ObjectId> shuffled(std::size_t m, std::mt19937_64& rng) {
    std::vector<ObjectId> ids(m);
    std::iota(ids.begin(), ids.end(), ObjectId{0});
    std::shuffle(ids.begin(), ids.end(), rng);
    return ids;
}

} // namespace

TEST_CASE("tournaments always yield consistent matrices") {
    std::mt19937_64 rng(20261016);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t m = 2 + rng() % 15;
        const auto state = test::random_tournament(m, rng);
        CAPTURE(m);
        CHECK(state.history.size() == m - 1);
        CHECK(state.completed_rounds.size() == expected_counts(m).rounds);
        const auto l = match_matrix(state);
        CHECK_NOTHROW(l.validate());
        const auto matrix = build_preference_matrix(l);
        CHECK(test::naive_consistent(matrix.rows()));
        const auto report = check_consistency(matrix);
        CHECK(report.consistent);
        CHECK(report.violations.empty());
        for (ObjectId p = 0; p < m; ++p) {
            CHECK(pivot_consistency_certificate(matrix, p));
        }
        const auto scale = value_scale(matrix, l.champion());
        CHECK(scale.u[scale.worst] == 0);
        CHECK(scale.v[l.champion()] == Rational(1));
        CHECK(reconstruct_matrix(scale.u) == matrix);
    }
}

TEST_CASE("perturbing one entry is detected") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 3 + rng() % 8;
        auto rows = build_preference_matrix(match_matrix(test::random_tournament(m, rng))).rows();
        const ObjectId i = rng() % m;
        ObjectId j = rng() % m;
        if (i == j) {
            j = (j + 1) % m;
        }
        const Units delta = 1 + static_cast<Units>(rng() % 5);
        rows[i][j] += delta;
        rows[j][i] -= delta;
        const auto report = check_consistency(PreferenceMatrix::from_rows(rows));
        CHECK(report.reciprocal);
        CHECK_FALSE(report.consistent);
        CHECK_FALSE(test::naive_consistent(rows));
        for (const auto& v : report.violations) {
            CHECK(v.residual == rows[v.i][v.k] + rows[v.k][v.j] - rows[v.i][v.j]);
        }
    }
}

TEST_CASE("revisions stay consistent under random edits") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t m = 2 + rng() % 11;
        const auto matrix =
            build_preference_matrix(match_matrix(test::random_tournament(m, rng, 0, 8)));
        const auto scale = value_scale(matrix, find_champion(matrix));
        auto rev = init_revision(scale, ranking(scale));
        CHECK(recompute(rev).matrix == matrix);

        rev = override_ranking(rev, shuffled(m, rng));
        for (int edit = 0; edit < 5; ++edit) {
            rev = set_cards(rev, rng() % (m - 1), static_cast<Units>(rng() % 20));
            const auto out = recompute(rev);
            CHECK(test::naive_consistent(out.matrix.rows()));
            // the order is strict after any override: scores fall along it
            for (std::size_t k = 0; k + 1 < m; ++k) {
                CHECK(out.scale.u[rev.order[k]] - out.scale.u[rev.order[k + 1]] == rev.cards[k] + 1);
            }
        }
    }
}

TEST_CASE("multiplicative transform preserves consistency") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 2 + rng() % 9;
        const auto matrix = build_preference_matrix(match_matrix(test::random_tournament(m, rng)));
        const double base = 1.1 + static_cast<double>(rng() % 30) / 10.0;
        const auto mm = to_multiplicative(matrix, base);
        for (ObjectId i = 0; i < m; ++i) {
            for (ObjectId j = 0; j < m; ++j) {
                CHECK(std::abs(mm.at(i, j) * mm.at(j, i) - 1.0) < 1e-9);
                CHECK(std::abs(std::log(mm.at(i, j)) / std::log(base) - matrix.at(i, j)) < 1e-9);
                for (ObjectId k = 0; k < m; ++k) {
                    const double lhs = mm.at(i, k) * mm.at(k, j);
                    CHECK(std::abs(lhs - mm.at(i, j)) <= 1e-9 * mm.at(i, j));
                }
            }
        }
    }
}

TEST_CASE("session documents round trip for random sessions") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 2 + rng() % 7;
        auto s = start_session(ObjectSet::numbered(m), PairingPolicy::sequential, {}, "p", "t");
        while (s.phase == Phase::eliciting) {
            CHECK(load_session(save_session(s)) == s);
            for (const auto& p : s.tournament.pending) {
                if (!p.resolved()) {
                    s = submit_match(s, p.pairing_id, rng() % 2 ? p.left : *p.right,
                                     static_cast<Units>(rng() % 4));
                    break;
                }
            }
        }
        CHECK(load_session(save_session(s)) == s);
        CHECK(canonical_dump(export_results(s)) == canonical_dump(tournament_results(s)));
    }
}
