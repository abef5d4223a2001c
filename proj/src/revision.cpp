/// @file revision.cpp

#include "ttm/revision.hpp"

#include <algorithm>
#include <numeric>

#include "ttm/error.hpp"

namespace ttm {

std::string_view to_string(Provenance provenance) {
    return provenance == Provenance::from_ttm ? "from_ttm" : "user_edited";
}

namespace {

void require_permutation(const std::vector<ObjectId>& order, std::size_t m) {
    if (order.size() != m) {
        throw Error(ErrorCode::invalid_argument,
                    "order must list all " + std::to_string(m) + " objects", "order");
    }
    std::vector<bool> seen(m, false);
    for (const ObjectId id : order) {
        if (id >= m || seen[id]) {
            throw Error(ErrorCode::invalid_argument, "order is not a permutation of the objects",
                        "order");
        }
        seen[id] = true;
    }
}

} // namespace

Revision init_revision(const ValueScale& scale, const Ranking& ranks) {
    Revision rev;
    for (const auto& group : ranks) {
        rev.order.insert(rev.order.end(), group.begin(), group.end());
    }
    require_permutation(rev.order, scale.u.size());
    const std::size_t gaps = rev.order.size() - 1;

    if (scale.degenerate) {
        rev.cards.assign(gaps, 0);
        rev.tied.assign(gaps, true);
        rev.provenance = Provenance::user_edited;
        return rev;
    }
    const auto between = card_distribution(scale, ranks);
    for (std::size_t g = 0; g < ranks.size(); ++g) {
        for (std::size_t k = 1; k < ranks[g].size(); ++k) {
            rev.cards.push_back(0);
            rev.tied.push_back(true);
        }
        if (g + 1 < ranks.size()) {
            rev.cards.push_back(between[g]);
            rev.tied.push_back(false);
        }
    }
    rev.provenance = Provenance::from_ttm;
    return rev;
}

Revision override_ranking(const Revision& revision, const std::vector<ObjectId>& new_order) {
    require_permutation(new_order, revision.order.size());
    Revision next;
    next.order = new_order;
    next.cards.assign(new_order.size() - 1, 0);
    next.tied.assign(new_order.size() - 1, false);
    next.provenance = Provenance::user_edited;
    return next;
}

Revision set_cards(const Revision& revision, std::size_t gap_index, Units cards,
                   const ElicitationConfig& config) {
    if (gap_index >= revision.cards.size()) {
        throw Error(ErrorCode::invalid_argument,
                    "gap index " + std::to_string(gap_index) + " out of range", "gap_index");
    }
    config.check_cards(cards);
    Revision next = revision;
    next.cards[gap_index] = cards;
    next.tied[gap_index] = false;
    next.provenance = Provenance::user_edited;
    return next;
}

RevisionResult recompute(const Revision& revision) {
    const std::size_t m = revision.order.size();
    std::vector<Units> u(m, 0);
    Units level = 0;
    for (std::size_t pos = m - 1; pos > 0; --pos) {
        const std::size_t gap = pos - 1;
        if (!revision.tied[gap]) {
            level = add_units(level, add_units(revision.cards[gap], 1));
        }
        u[revision.order[gap]] = level;
    }
    auto matrix = reconstruct_matrix(u);
    auto scale = value_scale(matrix, revision.order.front());
    return {std::move(matrix), std::move(scale)};
}

nlohmann::json to_json(const Revision& revision, const ObjectSet& objects) {
    nlohmann::json order = nlohmann::json::array();
    for (const ObjectId id : revision.order) {
        order.push_back(objects.name(id));
    }
    nlohmann::json tied = nlohmann::json::array();
    for (const bool t : revision.tied) {
        tied.push_back(t);
    }
    return {{"cards", revision.cards},
            {"order", std::move(order)},
            {"provenance", to_string(revision.provenance)},
            {"tied", std::move(tied)}};
}

Revision revision_from_json(const nlohmann::json& doc, const ObjectSet& objects,
                            const std::string& path) {
    const auto fail = [&](const std::string& field, const std::string& message) -> Error {
        return Error(ErrorCode::schema, path + "/" + field + ": " + message, path + "/" + field);
    };
    if (!doc.is_object()) {
        throw Error(ErrorCode::schema, path + ": revision must be an object", path);
    }
    for (const char* field : {"order", "cards", "provenance"}) {
        if (!doc.contains(field)) {
            throw fail(field, "missing field");
        }
    }
    Revision rev;
    if (!doc["order"].is_array()) {
        throw fail("order", "must be an array of names");
    }
    for (std::size_t i = 0; i < doc["order"].size(); ++i) {
        const auto& name = doc["order"][i];
        if (!name.is_string()) {
            throw fail("order/" + std::to_string(i), "must be a string");
        }
        const auto id = objects.find(name.get<std::string>());
        if (!id) {
            throw fail("order/" + std::to_string(i), "unknown object");
        }
        rev.order.push_back(*id);
    }
    try {
        require_permutation(rev.order, objects.size());
    } catch (const Error& e) {
        throw fail("order", e.what());
    }
    if (!doc["cards"].is_array() || doc["cards"].size() + 1 != objects.size()) {
        throw fail("cards", "must hold one count per gap");
    }
    for (std::size_t i = 0; i < doc["cards"].size(); ++i) {
        const auto& c = doc["cards"][i];
        if (!c.is_number_integer() || c.get<Units>() < 0) {
            throw fail("cards/" + std::to_string(i), "must be a non-negative integer");
        }
        rev.cards.push_back(c.get<Units>());
    }
    if (doc.contains("tied")) {
        const auto& tied = doc["tied"];
        if (!tied.is_array() || tied.size() != rev.cards.size()) {
            throw fail("tied", "must hold one flag per gap");
        }
        for (std::size_t i = 0; i < tied.size(); ++i) {
            if (!tied[i].is_boolean()) {
                throw fail("tied/" + std::to_string(i), "must be a boolean");
            }
            rev.tied.push_back(tied[i].get<bool>());
        }
    } else {
        rev.tied.assign(rev.cards.size(), false);
    }
    const auto& provenance = doc["provenance"];
    if (provenance == "from_ttm") {
        rev.provenance = Provenance::from_ttm;
    } else if (provenance == "user_edited") {
        rev.provenance = Provenance::user_edited;
    } else {
        throw fail("provenance", "must be \"from_ttm\" or \"user_edited\"");
    }
    return rev;
}

} // namespace ttm
