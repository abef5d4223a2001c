/// @file revision.hpp
/// @brief Post-tournament Deck-of-Cards editing: accept or reorder the
/// ranking, add or remove blank cards between neighbours, recompute.
///
/// A revision is an ordered list of objects (best first) with a card count
/// for every gap between neighbours. A gap of c cards is c + 1 units. Gaps
/// flagged as tied are 0 units; they only arise from tied tournament scores
/// and disappear as soon as the gap is edited.

#pragma once

#include <string_view>
#include <vector>

#include "json.hpp"
#include "ttm/core_model.hpp"
#include "ttm/evaluation.hpp"

namespace ttm {

enum class Provenance { from_ttm, user_edited };

std::string_view to_string(Provenance provenance);

struct Revision {
    std::vector<ObjectId> order;
    std::vector<Units> cards;
    std::vector<bool> tied;
    Provenance provenance = Provenance::from_ttm;

    bool operator==(const Revision&) const = default;
};

/// Starts from the tournament result. Tie groups are laid out by id with
/// tied gaps. A degenerate scale yields all-zero cards, all gaps tied, and
/// user_edited provenance.
Revision init_revision(const ValueScale& scale, const Ranking& ranks);

/// Replaces the order and resets every gap to zero cards (no ties).
/// Throws invalid_argument unless `new_order` is a permutation of the ids.
Revision override_ranking(const Revision& revision, const std::vector<ObjectId>& new_order);

/// Throws invalid_argument on an out-of-range gap or a card count rejected
/// by `config`.
Revision set_cards(const Revision& revision, std::size_t gap_index, Units cards,
                   const ElicitationConfig& config = {});

struct RevisionResult {
    PreferenceMatrix matrix;
    ValueScale scale;
};

/// Scores are accumulated from the last object (u = 0) upward, then the
/// matrix is rebuilt from them; the result is consistent by construction.
RevisionResult recompute(const Revision& revision);

/// {"order": [names], "cards": [int], "provenance": "from_ttm"|"user_edited",
///  "tied": [bool]}
nlohmann::json to_json(const Revision& revision, const ObjectSet& objects);
/// `path` prefixes schema error locations.
Revision revision_from_json(const nlohmann::json& doc, const ObjectSet& objects,
                            const std::string& path = "");

} // namespace ttm
