/// @file tournament.hpp
/// @brief Knockout elicitation: round pairing, byes, match recording and
/// emission of the match matrix.
///
/// Every transition is a pure function from an old state to a new state.
/// Rounds shrink the field from n to n - floor(n / 2); a tournament over m
/// objects therefore takes exactly m - 1 comparisons and ceil(log2 m) rounds.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ttm/core_model.hpp"

namespace ttm {

enum class PairingPolicy {
    /// Adjacent objects in the current field order; odd one out gets the bye.
    sequential,
    /// The caller proposes the pairs of every round.
    explicit_pairs,
};

std::string_view to_string(PairingPolicy policy);
PairingPolicy pairing_policy_from_string(std::string_view text);

enum class TournamentStatus { eliciting, finished };

struct Pairing {
    std::size_t pairing_id = 0;
    ObjectId left = 0;
    /// nullopt marks a bye: `left` advances without a comparison.
    std::optional<ObjectId> right;
    /// Set once the match has been recorded (always set for a bye).
    std::optional<ObjectId> winner;

    bool is_bye() const noexcept { return !right.has_value(); }
    bool resolved() const noexcept { return winner.has_value(); }

    bool operator==(const Pairing&) const = default;
};

struct RoundSummary {
    std::size_t round = 0;
    std::size_t field = 0;  ///< objects in contention at the start of the round
    std::size_t matches = 0;
    std::size_t byes = 0;

    bool operator==(const RoundSummary&) const = default;
};

struct TournamentState {
    ObjectSet objects;
    PairingPolicy policy = PairingPolicy::sequential;
    ElicitationConfig config;
    std::vector<ObjectId> alive;
    std::size_t round = 1;
    std::vector<Pairing> pending;
    std::vector<MatchRecord> history;
    std::vector<RoundSummary> completed_rounds;
    std::size_t next_pairing_id = 0;
    TournamentStatus status = TournamentStatus::eliciting;

    bool finished() const noexcept { return status == TournamentStatus::finished; }
    /// Explicit policy only: the current round has no pairings yet.
    bool awaiting_pairings() const noexcept { return !finished() && pending.empty(); }
    /// Every pairing of the current round is resolved.
    bool round_complete() const noexcept;
    const Pairing* find_pairing(std::size_t pairing_id) const;
    ObjectId champion() const;

    bool operator==(const TournamentState&) const = default;
};

/// Throws invalid_argument when fewer than two objects are given.
TournamentState new_tournament(ObjectSet objects, PairingPolicy policy = PairingPolicy::sequential,
                               ElicitationConfig config = {});

/// A proposed pair; a missing second element asks for a bye.
using ProposedPair = std::pair<ObjectId, std::optional<ObjectId>>;

/// Explicit policy: install the pairs of the current round. They must cover
/// the field exactly once, with a single bye iff the field is odd.
TournamentState set_pairings(const TournamentState& state, const std::vector<ProposedPair>& pairs);

/// Records `winner` beating the other side of `pairing_id` by cards + 1 units.
TournamentState record_match(const TournamentState& state, std::size_t pairing_id, ObjectId winner,
                             Units cards);

/// Records an explicit tie (0 units); the left object advances. Requires
/// config.allow_ties.
TournamentState record_tie(const TournamentState& state, std::size_t pairing_id);

/// Moves the winners (match order, bye last) into the next round, or finishes
/// the tournament when one object remains.
TournamentState advance_round(const TournamentState& state);

/// History followed by the convention row (champion, champion, 0).
MatchMatrix match_matrix(const TournamentState& state);

/// Closed-form bracket counts for m objects.
struct BracketCounts {
    std::size_t comparisons = 0;          ///< m - 1
    std::size_t rounds = 0;               ///< R = ceil(log2 m)
    std::size_t virtual_comparisons = 0;  ///< 2^R - m empty slots of the full bracket

    /// Upper bound 2^(R - r) on the comparisons held in round r (1-based).
    std::size_t per_round_max(std::size_t r) const;
};

BracketCounts expected_counts(std::size_t m);

/// `winner_name,loser_name,units` per row, convention row last.
std::string match_matrix_to_csv(const MatchMatrix& matrix, const ObjectSet& objects);

} // namespace ttm
