/// @file session.cpp

#include "ttm/session.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <random>

#include "text_util.hpp"
#include "ttm/error.hpp"
#include "ttm/matrix_builder.hpp"

namespace ttm {

using nlohmann::json;

std::string_view to_string(Phase phase) {
    switch (phase) {
    case Phase::setup: return "setup";
    case Phase::eliciting: return "eliciting";
    case Phase::results: return "results";
    case Phase::revising: return "revising";
    case Phase::closed: return "closed";
    }
    return "unknown";
}

Phase phase_from_string(std::string_view text) {
    for (const Phase p :
         {Phase::setup, Phase::eliciting, Phase::results, Phase::revising, Phase::closed}) {
        if (to_string(p) == text) {
            return p;
        }
    }
    throw Error(ErrorCode::schema, "unknown phase '" + std::string(text) + "'", "/phase");
}

bool transition_allowed(Phase from, Phase to) {
    switch (from) {
    case Phase::setup: return to == Phase::eliciting;
    case Phase::eliciting: return to == Phase::results;
    case Phase::results: return to == Phase::revising || to == Phase::closed;
    case Phase::revising: return to == Phase::results || to == Phase::closed;
    case Phase::closed: return false;
    }
    return false;
}

std::string new_session_id() {
    std::random_device device;
    std::array<std::uint32_t, 4> words{};
    for (auto& w : words) {
        w = device();
    }
    char buf[33];
    std::snprintf(buf, sizeof buf, "%08x%08x%08x%08x", words[0], words[1], words[2], words[3]);
    return buf;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm parts{};
    gmtime_r(&now, &parts);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &parts);
    return buf;
}

// ---------------------------------------------------------------------------
// Lifecycle

namespace {

void require_phase(const Session& session, std::initializer_list<Phase> allowed,
                   std::string_view action) {
    for (const Phase p : allowed) {
        if (session.phase == p) {
            return;
        }
    }
    throw Error(ErrorCode::conflict, std::string(action) + " is not allowed in phase '" +
                                         std::string(to_string(session.phase)) + "'",
                "phase");
}

void move_to(Session& session, Phase to) {
    if (session.phase != to && !transition_allowed(session.phase, to)) {
        throw Error(ErrorCode::conflict, "cannot move from phase '" +
                                             std::string(to_string(session.phase)) + "' to '" +
                                             std::string(to_string(to)) + "'",
                    "phase");
    }
    session.phase = to;
}

Session after_result(Session session) {
    auto& t = session.tournament;
    if (t.round_complete()) {
        t = advance_round(t);
    }
    if (t.finished()) {
        auto matrix = build_preference_matrix(match_matrix(t));
        auto scale = value_scale(matrix, t.champion());
        session.revision = init_revision(scale, ranking(scale));
        session.matrix = std::move(matrix);
        session.scale = std::move(scale);
        move_to(session, Phase::results);
    }
    session.updated_at = utc_timestamp();
    return session;
}

} // namespace

Session start_session(ObjectSet objects, PairingPolicy policy, ElicitationConfig config,
                      std::string id, std::string now) {
    Session session{
        .id = std::move(id),
        .tournament = new_tournament(std::move(objects), policy, config),
        .created_at = now,
        .updated_at = now,
    };
    move_to(session, Phase::eliciting);
    return session;
}

Session submit_pairings(const Session& session, const std::vector<ProposedPair>& pairs) {
    require_phase(session, {Phase::eliciting}, "pairing");
    Session next = session;
    next.tournament = set_pairings(session.tournament, pairs);
    next.updated_at = utc_timestamp();
    return next;
}

Session submit_match(const Session& session, std::size_t pairing_id, ObjectId winner, Units cards) {
    require_phase(session, {Phase::eliciting}, "match submission");
    Session next = session;
    next.tournament = record_match(session.tournament, pairing_id, winner, cards);
    return after_result(std::move(next));
}

Session submit_tie(const Session& session, std::size_t pairing_id) {
    require_phase(session, {Phase::eliciting}, "match submission");
    Session next = session;
    next.tournament = record_tie(session.tournament, pairing_id);
    return after_result(std::move(next));
}

Session revise_ranking(const Session& session, const std::vector<ObjectId>& order) {
    require_phase(session, {Phase::results, Phase::revising}, "ranking edit");
    Session next = session;
    next.revision = override_ranking(*session.revision, order);
    move_to(next, Phase::revising);
    next.updated_at = utc_timestamp();
    return next;
}

Session revise_cards(const Session& session, std::size_t gap_index, Units cards) {
    require_phase(session, {Phase::results, Phase::revising}, "card edit");
    Session next = session;
    next.revision = set_cards(*session.revision, gap_index, cards, session.tournament.config);
    move_to(next, Phase::revising);
    next.updated_at = utc_timestamp();
    return next;
}

Session accept(const Session& session) {
    require_phase(session, {Phase::results, Phase::revising}, "accept");
    Session next = session;
    move_to(next, Phase::closed);
    next.updated_at = utc_timestamp();
    return next;
}

nlohmann::json tournament_results(const Session& session) {
    if (!session.scale) {
        throw Error(ErrorCode::conflict, "results are not available before the tournament ends",
                    "phase");
    }
    return results_document(session.objects(), *session.scale);
}

nlohmann::json export_results(const Session& session) {
    if (!session.revision) {
        return tournament_results(session);
    }
    return results_document(session.objects(), recompute(*session.revision).scale);
}

// ---------------------------------------------------------------------------
// Session document

std::string canonical_dump(const nlohmann::json& doc) {
    // nlohmann::json objects are std::map backed, so keys come out sorted.
    return doc.dump();
}

namespace {

json name_or_null(const ObjectSet& objects, const std::optional<ObjectId>& id) {
    return id ? json(objects.name(*id)) : json(nullptr);
}

json tournament_to_json(const TournamentState& t) {
    const auto& objects = t.objects;
    json alive = json::array();
    for (const ObjectId id : t.alive) {
        alive.push_back(objects.name(id));
    }
    json pending = json::array();
    for (const auto& p : t.pending) {
        pending.push_back({{"left", objects.name(p.left)},
                           {"pairing_id", p.pairing_id},
                           {"right", name_or_null(objects, p.right)},
                           {"winner", name_or_null(objects, p.winner)}});
    }
    json history = json::array();
    for (const auto& r : t.history) {
        history.push_back({{"loser", objects.name(r.loser)},
                           {"units", r.units},
                           {"winner", objects.name(r.winner)}});
    }
    json rounds = json::array();
    for (const auto& r : t.completed_rounds) {
        rounds.push_back(
            {{"byes", r.byes}, {"field", r.field}, {"matches", r.matches}, {"round", r.round}});
    }
    return {
        {"alive", std::move(alive)},
        {"completed_rounds", std::move(rounds)},
        {"config",
         {{"allow_ties", t.config.allow_ties},
          {"card_cap", t.config.card_cap ? json(*t.config.card_cap) : json(nullptr)}}},
        {"history", std::move(history)},
        {"next_pairing_id", t.next_pairing_id},
        {"objects", objects.names()},
        {"pending", std::move(pending)},
        {"policy", to_string(t.policy)},
        {"round", t.round},
        {"status", t.finished() ? "finished" : "eliciting"},
    };
}

json scale_to_json(const ValueScale& s) {
    json v = json::array();
    for (const auto& value : s.v) {
        v.push_back(to_string(value));
    }
    return {{"degenerate", s.degenerate},
            {"u", s.u},
            {"v", std::move(v)},
            {"winner", s.winner},
            {"worst", s.worst}};
}

/// Field accessor that reports JSON paths in schema errors.
class Reader {
public:
    Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            throw Error(ErrorCode::schema, here() + ": expected an object", here());
        }
    }

    const json& field(const char* key) const {
        if (!node_.contains(key)) {
            throw Error(ErrorCode::schema, at(key) + ": missing field", at(key));
        }
        return node_[key];
    }
    bool has_value(const char* key) const { return !field(key).is_null(); }
    Reader object(const char* key) const { return Reader(field(key), at(key)); }

    const json& array(const char* key) const {
        const auto& a = field(key);
        if (!a.is_array()) {
            throw Error(ErrorCode::schema, at(key) + ": expected an array", at(key));
        }
        return a;
    }
    std::string string(const char* key) const {
        const auto& s = field(key);
        if (!s.is_string()) {
            throw Error(ErrorCode::schema, at(key) + ": expected a string", at(key));
        }
        return s.get<std::string>();
    }
    bool boolean(const char* key) const {
        const auto& b = field(key);
        if (!b.is_boolean()) {
            throw Error(ErrorCode::schema, at(key) + ": expected a boolean", at(key));
        }
        return b.get<bool>();
    }
    std::int64_t integer(const char* key) const { return integer_at(field(key), at(key)); }
    std::size_t count(const char* key) const { return count_at(field(key), at(key)); }

    static std::int64_t integer_at(const json& v, const std::string& path) {
        if (!v.is_number_integer()) {
            throw Error(ErrorCode::schema, path + ": expected an integer", path);
        }
        return v.get<std::int64_t>();
    }
    static std::size_t count_at(const json& v, const std::string& path) {
        if (!v.is_number_unsigned()) {
            throw Error(ErrorCode::schema, path + ": expected a non-negative integer", path);
        }
        return v.get<std::size_t>();
    }

    std::string here() const { return path_.empty() ? "/" : path_; }
    std::string at(const std::string& key) const { return path_ + "/" + key; }

private:
    const json& node_;
    std::string path_;
};

ObjectId object_at(const ObjectSet& objects, const json& v, const std::string& path) {
    if (!v.is_string()) {
        throw Error(ErrorCode::schema, path + ": expected an object name", path);
    }
    const auto id = objects.find(v.get<std::string>());
    if (!id) {
        throw Error(ErrorCode::schema, path + ": unknown object '" + v.get<std::string>() + "'",
                    path);
    }
    return *id;
}

TournamentState tournament_from_json(const Reader& r) {
    std::vector<std::string> names;
    const auto& names_doc = r.array("objects");
    for (std::size_t i = 0; i < names_doc.size(); ++i) {
        if (!names_doc[i].is_string()) {
            throw Error(ErrorCode::schema, r.at("objects/" + std::to_string(i)) + ": expected a string",
                        r.at("objects/" + std::to_string(i)));
        }
        names.push_back(names_doc[i].get<std::string>());
    }
    std::optional<ObjectSet> objects;
    try {
        objects.emplace(std::move(names));
    } catch (const Error& e) {
        throw Error(ErrorCode::schema, r.at("objects") + ": " + e.what(), r.at("objects"));
    }

    const auto config_doc = r.object("config");
    ElicitationConfig config;
    config.allow_ties = config_doc.boolean("allow_ties");
    config.card_cap = std::nullopt;
    if (config_doc.has_value("card_cap")) {
        config.card_cap = config_doc.integer("card_cap");
    }

    PairingPolicy policy{};
    try {
        policy = pairing_policy_from_string(r.string("policy"));
    } catch (const Error&) {
        throw Error(ErrorCode::schema, r.at("policy") + ": unknown policy", r.at("policy"));
    }

    TournamentState t{.objects = *objects, .policy = policy, .config = config};
    const auto& alive = r.array("alive");
    for (std::size_t i = 0; i < alive.size(); ++i) {
        t.alive.push_back(object_at(t.objects, alive[i], r.at("alive/" + std::to_string(i))));
    }
    t.round = r.count("round");

    const auto& pending = r.array("pending");
    for (std::size_t i = 0; i < pending.size(); ++i) {
        const Reader p(pending[i], r.at("pending/" + std::to_string(i)));
        Pairing pairing;
        pairing.pairing_id = p.count("pairing_id");
        pairing.left = object_at(t.objects, p.field("left"), p.at("left"));
        if (p.has_value("right")) {
            pairing.right = object_at(t.objects, p.field("right"), p.at("right"));
        }
        if (p.has_value("winner")) {
            pairing.winner = object_at(t.objects, p.field("winner"), p.at("winner"));
        }
        t.pending.push_back(pairing);
    }

    const auto& history = r.array("history");
    for (std::size_t i = 0; i < history.size(); ++i) {
        const Reader h(history[i], r.at("history/" + std::to_string(i)));
        t.history.push_back({object_at(t.objects, h.field("winner"), h.at("winner")),
                             object_at(t.objects, h.field("loser"), h.at("loser")),
                             h.integer("units")});
    }

    const auto& rounds = r.array("completed_rounds");
    for (std::size_t i = 0; i < rounds.size(); ++i) {
        const Reader c(rounds[i], r.at("completed_rounds/" + std::to_string(i)));
        t.completed_rounds.push_back(
            {c.count("round"), c.count("field"), c.count("matches"), c.count("byes")});
    }
    t.next_pairing_id = r.count("next_pairing_id");
    const auto status = r.string("status");
    if (status == "finished") {
        t.status = TournamentStatus::finished;
    } else if (status == "eliciting") {
        t.status = TournamentStatus::eliciting;
    } else {
        throw Error(ErrorCode::schema, r.at("status") + ": unknown status", r.at("status"));
    }
    return t;
}

Rational rational_from_string(const std::string& text, const std::string& path) {
    const auto slash = text.find('/');
    const auto num = detail::parse_int(std::string_view(text).substr(0, slash));
    const auto den = slash == std::string::npos
                         ? std::optional<std::int64_t>(1)
                         : detail::parse_int(std::string_view(text).substr(slash + 1));
    if (!num || !den || *den == 0) {
        throw Error(ErrorCode::schema, path + ": malformed rational '" + text + "'", path);
    }
    return Rational(*num, *den);
}

ValueScale scale_from_json(const Reader& r, std::size_t m) {
    ValueScale s;
    s.degenerate = r.boolean("degenerate");
    s.winner = r.count("winner");
    s.worst = r.count("worst");
    const auto& u = r.array("u");
    const auto& v = r.array("v");
    if (u.size() != m || v.size() != m || s.winner >= m || s.worst >= m) {
        throw Error(ErrorCode::schema, r.here() + ": scale does not match the object count",
                    r.here());
    }
    for (std::size_t i = 0; i < m; ++i) {
        s.u.push_back(Reader::integer_at(u[i], r.at("u/" + std::to_string(i))));
        const auto path = r.at("v/" + std::to_string(i));
        if (!v[i].is_string()) {
            throw Error(ErrorCode::schema, path + ": expected a rational string", path);
        }
        s.v.push_back(rational_from_string(v[i].get<std::string>(), path));
    }
    return s;
}

} // namespace

nlohmann::json save_session(const Session& s) {
    return {
        {"created_at", s.created_at},
        {"id", s.id},
        {"matrix", s.matrix ? to_json(*s.matrix) : json(nullptr)},
        {"phase", to_string(s.phase)},
        {"revision", s.revision ? to_json(*s.revision, s.objects()) : json(nullptr)},
        {"scale", s.scale ? scale_to_json(*s.scale) : json(nullptr)},
        {"tournament", tournament_to_json(s.tournament)},
        {"updated_at", s.updated_at},
        {"version", s.version},
    };
}

Session load_session(const nlohmann::json& doc) {
    const Reader r(doc, "");
    Phase phase{};
    try {
        phase = phase_from_string(r.string("phase"));
    } catch (const Error&) {
        throw Error(ErrorCode::schema, "/phase: unknown phase", "/phase");
    }
    Session s{
        .id = r.string("id"),
        .tournament = tournament_from_json(r.object("tournament")),
        .phase = phase,
        .version = r.count("version"),
        .created_at = r.string("created_at"),
        .updated_at = r.string("updated_at"),
    };
    const std::size_t m = s.objects().size();
    if (r.has_value("matrix")) {
        try {
            s.matrix = preference_matrix_from_json(r.field("matrix"));
        } catch (const Error& e) {
            throw Error(ErrorCode::schema, "/matrix: " + std::string(e.what()), "/matrix");
        }
        if (s.matrix->size() != m) {
            throw Error(ErrorCode::schema, "/matrix: dimension does not match the object count",
                        "/matrix");
        }
    }
    if (r.has_value("scale")) {
        s.scale = scale_from_json(r.object("scale"), m);
    }
    if (r.has_value("revision")) {
        s.revision = revision_from_json(r.field("revision"), s.objects(), "/revision");
    }
    const bool has_results =
        s.phase == Phase::results || s.phase == Phase::revising || s.phase == Phase::closed;
    if (has_results != (s.matrix && s.scale)) {
        throw Error(ErrorCode::schema,
                    "/phase: matrix and scale must be present exactly in the result phases",
                    "/phase");
    }
    return s;
}

// ---------------------------------------------------------------------------
// Match-matrix CSV

std::pair<ObjectSet, MatchMatrix> import_match_matrix(std::string_view csv,
                                                      const std::optional<ObjectSet>& objects,
                                                      std::string_view source) {
    struct Row {
        std::size_t line;
        std::string winner;
        std::string loser;
        Units units;
    };
    std::vector<Row> rows;
    for (const auto& [number, line] : detail::lines(csv)) {
        const auto where = detail::location(source, number);
        const auto fields = detail::split_csv_record(line);
        if (!fields) {
            throw Error(ErrorCode::parse, where + ": unterminated quoted field", where);
        }
        if (fields->size() != 3) {
            throw Error(ErrorCode::parse,
                        where + ": expected 3 fields (winner,loser,units), found " +
                            std::to_string(fields->size()),
                        where);
        }
        const auto units = detail::parse_int((*fields)[2]);
        if (!units || *units < 0) {
            throw Error(ErrorCode::parse,
                        where + ": units must be a non-negative integer, got '" + (*fields)[2] + "'",
                        where);
        }
        rows.push_back({number, (*fields)[0], (*fields)[1], *units});
    }
    if (rows.empty()) {
        throw Error(ErrorCode::parse, std::string(source) + ": no match rows");
    }

    std::vector<std::string> names;
    if (objects) {
        names = objects->names();
    } else {
        for (const auto& row : rows) {
            for (const auto* name : {&row.winner, &row.loser}) {
                if (std::find(names.begin(), names.end(), *name) == names.end()) {
                    names.push_back(*name);
                }
            }
        }
    }
    ObjectSet set = objects ? *objects : ObjectSet(names);

    MatchMatrix matrix;
    for (const auto& row : rows) {
        const auto where = detail::location(source, row.line);
        const auto winner = set.find(row.winner);
        const auto loser = set.find(row.loser);
        if (!winner || !loser) {
            throw Error(ErrorCode::not_found,
                        where + ": unknown object '" + (winner ? row.loser : row.winner) + "'",
                        where);
        }
        matrix.rows.push_back({*winner, *loser, row.units});
    }
    if (matrix.size() != set.size()) {
        const bool convention = matrix.rows.back().winner == matrix.rows.back().loser;
        throw Error(ErrorCode::structural,
                    std::string(source) + ": expected " + std::to_string(set.size()) +
                        " rows (one per object, convention row last), found " +
                        std::to_string(matrix.size()) +
                        (convention ? "" : "; missing convention row"));
    }
    try {
        matrix.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::structural, std::string(source) + ": " + e.what());
    }
    return {std::move(set), std::move(matrix)};
}

} // namespace ttm
