/// @file session.hpp
/// @brief Elicitation session lifecycle, its JSON document, and the
/// match-matrix / results interchange files.
///
/// Phases advance Setup -> Eliciting -> Results -> (Revising <-> Results)
/// -> Closed. The tournament history is never rewritten after the fact;
/// revisions are layered on top so both the tournament result and the
/// accepted result stay available.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ttm/core_model.hpp"
#include "ttm/evaluation.hpp"
#include "ttm/revision.hpp"
#include "ttm/tournament.hpp"

namespace ttm {

enum class Phase { setup, eliciting, results, revising, closed };

std::string_view to_string(Phase phase);
Phase phase_from_string(std::string_view text);
bool transition_allowed(Phase from, Phase to);

struct Session {
    std::string id;
    TournamentState tournament;
    std::optional<PreferenceMatrix> matrix;
    std::optional<ValueScale> scale;
    std::optional<Revision> revision;
    Phase phase = Phase::setup;
    /// Bumped by the store on every successful write.
    std::uint64_t version = 0;
    std::string created_at;
    std::string updated_at;

    const ObjectSet& objects() const noexcept { return tournament.objects; }

    bool operator==(const Session&) const = default;
};

/// 128 random bits as 32 lowercase hex digits.
std::string new_session_id();

/// Current UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

/// Creates a session in the Eliciting phase with round one paired (unless
/// the policy is explicit).
Session start_session(ObjectSet objects, PairingPolicy policy, ElicitationConfig config,
                      std::string id = new_session_id(), std::string now = utc_timestamp());

// Lifecycle steps. Each throws conflict when called in the wrong phase.

Session submit_pairings(const Session& session, const std::vector<ProposedPair>& pairs);
/// Records one match; completes the round and, when the tournament finishes,
/// builds the matrix, the scale and the initial revision (phase Results).
Session submit_match(const Session& session, std::size_t pairing_id, ObjectId winner, Units cards);
Session submit_tie(const Session& session, std::size_t pairing_id);
Session revise_ranking(const Session& session, const std::vector<ObjectId>& order);
Session revise_cards(const Session& session, std::size_t gap_index, Units cards);
Session accept(const Session& session);

// Documents.

/// Canonical form: sorted keys, compact.
std::string canonical_dump(const nlohmann::json& doc);

nlohmann::json save_session(const Session& session);
/// Throws schema with the JSON path of the first offending field.
Session load_session(const nlohmann::json& doc);

/// Results of the tournament itself.
nlohmann::json tournament_results(const Session& session);
/// Results of the current revision; equals tournament_results() until the
/// user edits something.
nlohmann::json export_results(const Session& session);

/// Parses `winner,loser,units` rows (convention row last). Objects are taken
/// from `objects` when given, otherwise in order of first appearance.
std::pair<ObjectSet, MatchMatrix> import_match_matrix(std::string_view csv,
                                                      const std::optional<ObjectSet>& objects = {},
                                                      std::string_view source = "<input>");

} // namespace ttm
