/// @file tournament.cpp

#include "ttm/tournament.hpp"

#include <algorithm>
#include <sstream>

#include "text_util.hpp"
#include "ttm/error.hpp"

namespace ttm {

std::string_view to_string(PairingPolicy policy) {
    return policy == PairingPolicy::sequential ? "sequential" : "explicit";
}

PairingPolicy pairing_policy_from_string(std::string_view text) {
    if (text == "sequential") {
        return PairingPolicy::sequential;
    }
    if (text == "explicit") {
        return PairingPolicy::explicit_pairs;
    }
    throw Error(ErrorCode::invalid_argument,
                "unknown pairing policy '" + std::string(text) + "'", "pairing_policy");
}

bool TournamentState::round_complete() const noexcept {
    return !pending.empty() &&
           std::all_of(pending.begin(), pending.end(), [](const Pairing& p) { return p.resolved(); });
}

const Pairing* TournamentState::find_pairing(std::size_t pairing_id) const {
    for (const auto& p : pending) {
        if (p.pairing_id == pairing_id) {
            return &p;
        }
    }
    return nullptr;
}

ObjectId TournamentState::champion() const {
    if (!finished()) {
        throw Error(ErrorCode::conflict, "tournament not finished");
    }
    return alive.front();
}

namespace {

void append_sequential_pairings(TournamentState& state) {
    const auto& field = state.alive;
    for (std::size_t i = 0; i + 1 < field.size(); i += 2) {
        state.pending.push_back({state.next_pairing_id++, field[i], field[i + 1], std::nullopt});
    }
    if (field.size() % 2 == 1) {
        state.pending.push_back({state.next_pairing_id++, field.back(), std::nullopt, field.back()});
    }
}

void start_round(TournamentState& state) {
    state.pending.clear();
    if (state.policy == PairingPolicy::sequential) {
        append_sequential_pairings(state);
    }
}

Pairing& pending_for_result(TournamentState& state, std::size_t pairing_id) {
    if (state.finished()) {
        throw Error(ErrorCode::conflict, "tournament already finished");
    }
    for (auto& p : state.pending) {
        if (p.pairing_id != pairing_id) {
            continue;
        }
        if (p.is_bye()) {
            throw Error(ErrorCode::conflict, "pairing " + std::to_string(pairing_id) +
                                                 " is a bye and takes no result");
        }
        if (p.resolved()) {
            throw Error(ErrorCode::conflict,
                        "match " + std::to_string(pairing_id) + " already recorded");
        }
        return p;
    }
    throw Error(ErrorCode::not_found,
                "no pending pairing " + std::to_string(pairing_id) + " in round " +
                    std::to_string(state.round),
                "pairing_id");
}

} // namespace

TournamentState new_tournament(ObjectSet objects, PairingPolicy policy, ElicitationConfig config) {
    if (config.card_cap && *config.card_cap < 0) {
        throw Error(ErrorCode::invalid_argument, "card cap must be non-negative", "card_cap");
    }
    TournamentState state{.objects = std::move(objects), .policy = policy, .config = config};
    for (ObjectId i = 0; i < state.objects.size(); ++i) {
        state.alive.push_back(i);
    }
    start_round(state);
    return state;
}

TournamentState set_pairings(const TournamentState& state, const std::vector<ProposedPair>& pairs) {
    if (state.policy != PairingPolicy::explicit_pairs) {
        throw Error(ErrorCode::conflict, "pairings are chosen automatically under this policy");
    }
    if (!state.awaiting_pairings()) {
        throw Error(ErrorCode::conflict, "round " + std::to_string(state.round) +
                                             " is already paired");
    }
    std::vector<int> seen(state.objects.size(), 0);
    const auto in_field = [&](ObjectId id) {
        return std::find(state.alive.begin(), state.alive.end(), id) != state.alive.end();
    };
    const auto mark = [&](ObjectId id) {
        if (id >= seen.size() || !in_field(id)) {
            throw Error(ErrorCode::invalid_argument,
                        "object " + std::to_string(id) + " is not in contention", "pairs");
        }
        if (seen[id]++ > 0) {
            throw Error(ErrorCode::invalid_argument,
                        "object '" + state.objects.name(id) + "' paired twice", "pairs");
        }
    };

    std::size_t byes = 0;
    for (const auto& [left, right] : pairs) {
        mark(left);
        if (right) {
            mark(*right);
        } else {
            ++byes;
        }
    }
    const std::size_t covered = std::count(seen.begin(), seen.end(), 1);
    if (covered != state.alive.size()) {
        throw Error(ErrorCode::invalid_argument, "pairs must cover every object in contention",
                    "pairs");
    }
    if (byes != state.alive.size() % 2) {
        throw Error(ErrorCode::invalid_argument,
                    state.alive.size() % 2 == 1 ? "an odd field needs exactly one bye"
                                                : "an even field takes no bye",
                    "pairs");
    }

    TournamentState next = state;
    // Real matches first, bye last, so winner order matches the sequential rule.
    for (const auto& [left, right] : pairs) {
        if (right) {
            next.pending.push_back({next.next_pairing_id++, left, right, std::nullopt});
        }
    }
    for (const auto& [left, right] : pairs) {
        if (!right) {
            next.pending.push_back({next.next_pairing_id++, left, std::nullopt, left});
        }
    }
    return next;
}

TournamentState record_match(const TournamentState& state, std::size_t pairing_id, ObjectId winner,
                             Units cards) {
    TournamentState next = state;
    Pairing& pairing = pending_for_result(next, pairing_id);
    if (winner != pairing.left && winner != *pairing.right) {
        throw Error(ErrorCode::invalid_argument, "winner is not part of pairing " +
                                                     std::to_string(pairing_id),
                    "winner");
    }
    state.config.check_cards(cards);
    const ObjectId loser = winner == pairing.left ? *pairing.right : pairing.left;
    pairing.winner = winner;
    next.history.push_back({winner, loser, add_units(cards, 1)});
    return next;
}

TournamentState record_tie(const TournamentState& state, std::size_t pairing_id) {
    if (!state.config.allow_ties) {
        throw Error(ErrorCode::invalid_argument, "ties are not permitted in this session", "tie");
    }
    TournamentState next = state;
    Pairing& pairing = pending_for_result(next, pairing_id);
    pairing.winner = pairing.left;
    next.history.push_back({pairing.left, *pairing.right, 0});
    return next;
}

TournamentState advance_round(const TournamentState& state) {
    if (state.finished()) {
        throw Error(ErrorCode::conflict, "tournament already finished");
    }
    if (!state.round_complete()) {
        throw Error(ErrorCode::conflict, "round " + std::to_string(state.round) +
                                             " still has unresolved pairings");
    }
    TournamentState next = state;
    RoundSummary summary{.round = state.round, .field = state.alive.size()};
    next.alive.clear();
    for (const auto& p : state.pending) {
        if (!p.is_bye()) {
            next.alive.push_back(*p.winner);
            ++summary.matches;
        }
    }
    for (const auto& p : state.pending) {
        if (p.is_bye()) {
            next.alive.push_back(p.left);
            ++summary.byes;
        }
    }
    next.completed_rounds.push_back(summary);
    next.pending.clear();
    if (next.alive.size() == 1) {
        next.status = TournamentStatus::finished;
    } else {
        ++next.round;
        start_round(next);
    }
    return next;
}

MatchMatrix match_matrix(const TournamentState& state) {
    if (!state.finished()) {
        throw Error(ErrorCode::conflict, "tournament not finished");
    }
    MatchMatrix out{state.history};
    const ObjectId champ = state.champion();
    out.rows.push_back({champ, champ, 0});
    return out;
}

std::size_t BracketCounts::per_round_max(std::size_t r) const {
    if (r < 1 || r > rounds) {
        throw Error(ErrorCode::invalid_argument, "round out of range");
    }
    return std::size_t{1} << (rounds - r);
}

BracketCounts expected_counts(std::size_t m) {
    if (m < 2) {
        throw Error(ErrorCode::invalid_argument, "tournament requires at least two objects");
    }
    std::size_t rounds = 0;
    while ((std::size_t{1} << rounds) < m) {
        ++rounds;
    }
    return {m - 1, rounds, (std::size_t{1} << rounds) - m};
}

std::string match_matrix_to_csv(const MatchMatrix& matrix, const ObjectSet& objects) {
    std::ostringstream out;
    for (const auto& row : matrix.rows) {
        out << detail::csv_escape(objects.name(row.winner)) << ','
            << detail::csv_escape(objects.name(row.loser)) << ',' << row.units << '\n';
    }
    return out.str();
}

} // namespace ttm
