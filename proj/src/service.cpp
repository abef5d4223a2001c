/// @file service.cpp

#include "ttm/service.hpp"

#include <algorithm>

#include "ttm/error.hpp"

namespace ttm {

using nlohmann::json;

int http_status(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_argument: return 422;
    case ErrorCode::not_found: return 404;
    case ErrorCode::conflict: return 409;
    case ErrorCode::version_conflict: return 409;
    case ErrorCode::structural: return 422;
    case ErrorCode::inconsistent: return 422;
    case ErrorCode::schema: return 422;
    case ErrorCode::parse: return 400;
    case ErrorCode::io: return 500;
    }
    return 500;
}

namespace {

ApiResponse json_response(int status, const json& body) {
    return {status, canonical_dump(body)};
}

ApiResponse session_response(int status, const Session& s, json body) {
    body["session_id"] = s.id;
    body["phase"] = to_string(s.phase);
    body["version"] = s.version;
    auto response = json_response(status, body);
    response.headers["ETag"] = "\"" + std::to_string(s.version) + "\"";
    return response;
}

Error bad_field(const std::string& field, const std::string& message) {
    return Error(ErrorCode::invalid_argument, message, field);
}

const json& require(const json& body, const char* field) {
    if (!body.is_object() || !body.contains(field)) {
        throw bad_field(field, std::string("missing field '") + field + "'");
    }
    return body[field];
}

std::int64_t require_int(const json& body, const char* field) {
    const auto& v = require(body, field);
    if (!v.is_number_integer()) {
        throw bad_field(field, std::string("'") + field + "' must be an integer");
    }
    return v.get<std::int64_t>();
}

std::size_t require_index(const json& body, const char* field) {
    const auto v = require_int(body, field);
    if (v < 0) {
        throw bad_field(field, std::string("'") + field + "' must be non-negative");
    }
    return static_cast<std::size_t>(v);
}

ObjectId require_object(const Session& s, const json& name, const std::string& field) {
    if (!name.is_string()) {
        throw bad_field(field, "expected an object name");
    }
    if (auto id = s.objects().find(name.get<std::string>())) {
        return *id;
    }
    throw bad_field(field, "unknown object '" + name.get<std::string>() + "'");
}

json pairings_view(const Session& s) {
    const auto& t = s.tournament;
    json pairings = json::array();
    for (const auto& p : t.pending) {
        json entry = {{"pairing_id", p.pairing_id},
                      {"left", s.objects().name(p.left)},
                      {"right", p.right ? json(s.objects().name(*p.right)) : json(nullptr)},
                      {"bye", p.is_bye()},
                      {"resolved", p.resolved()}};
        entry["winner"] = p.winner ? json(s.objects().name(*p.winner)) : json(nullptr);
        pairings.push_back(std::move(entry));
    }
    json contenders = json::array();
    for (const ObjectId id : t.alive) {
        contenders.push_back(s.objects().name(id));
    }
    return {{"round", t.round},
            {"finished", t.finished()},
            {"awaiting_pairings", t.awaiting_pairings()},
            {"contenders", std::move(contenders)},
            {"pairings", std::move(pairings)},
            {"matches_recorded", t.history.size()},
            {"matches_total", s.objects().size() - 1}};
}

json results_view(const Session& s) {
    json body = {{"results", tournament_results(s)}};
    if (s.revision) {
        body["revision"] = to_json(*s.revision, s.objects());
        body["revised_results"] = export_results(s);
    }
    return body;
}

void check_expected_version(const Session& s, const ApiRequest& request, const json& body) {
    std::optional<std::uint64_t> expected;
    if (body.is_object() && body.contains("version")) {
        if (!body["version"].is_number_unsigned()) {
            throw bad_field("version", "'version' must be a non-negative integer");
        }
        expected = body["version"].get<std::uint64_t>();
    } else if (const auto it = request.headers.find("If-Match"); it != request.headers.end()) {
        std::string tag = it->second;
        tag.erase(std::remove(tag.begin(), tag.end(), '"'), tag.end());
        try {
            expected = std::stoull(tag);
        } catch (const std::exception&) {
            throw bad_field("If-Match", "If-Match must carry a session version");
        }
    }
    if (expected && *expected != s.version) {
        throw Error(ErrorCode::version_conflict,
                    "session is at version " + std::to_string(s.version) + ", request expected " +
                        std::to_string(*expected) + "; reload and retry",
                    "version");
    }
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    const auto query = path.find('?');
    const std::string clean = path.substr(0, query);
    while (start < clean.size()) {
        auto end = clean.find('/', start);
        if (end == std::string::npos) {
            end = clean.size();
        }
        if (end > start) {
            parts.push_back(clean.substr(start, end - start));
        }
        start = end + 1;
    }
    return parts;
}

} // namespace

ApiResponse error_response(const Error& error) {
    json detail = {{"code", to_string(error.code())}, {"message", error.what()}};
    if (!error.field().empty()) {
        detail["field"] = error.field();
    }
    auto response = json_response(http_status(error.code()), {{"error", detail}});
    if (error.code() == ErrorCode::version_conflict) {
        response.headers["Retry-After"] = "0";
    }
    return response;
}

Service::Service(SessionStore& store, ServiceOptions options)
    : store_(store), options_(options) {}

ApiResponse Service::handle(const ApiRequest& request) {
    try {
        const auto parts = split_path(request.path);
        if (parts.size() < 2 || parts[0] != "api" || parts[1] != "sessions") {
            throw Error(ErrorCode::not_found, "no route for " + request.path);
        }
        if (parts.size() == 2) {
            if (request.method != "POST") {
                throw Error(ErrorCode::not_found, "no route for " + request.method + " " + request.path);
            }
            json body;
            try {
                body = json::parse(request.body.empty() ? "{}" : request.body);
            } catch (const json::parse_error& e) {
                throw Error(ErrorCode::parse, std::string("malformed JSON body: ") + e.what());
            }
            return create_session(body);
        }
        std::string action;
        for (std::size_t i = 3; i < parts.size(); ++i) {
            action += (action.empty() ? "" : "/") + parts[i];
        }
        return dispatch(request, parts[2], action);
    } catch (const Error& e) {
        return error_response(e);
    } catch (const std::exception& e) {
        return error_response(Error(ErrorCode::io, std::string("internal error: ") + e.what()));
    }
}

ApiResponse Service::create_session(const json& body) {
    const auto& objects = require(body, "objects");
    if (!objects.is_array()) {
        throw bad_field("objects", "'objects' must be an array of names");
    }
    std::vector<std::string> names;
    for (const auto& n : objects) {
        if (!n.is_string()) {
            throw bad_field("objects", "object names must be strings");
        }
        names.push_back(n.get<std::string>());
    }
    if (names.size() > options_.max_objects) {
        throw bad_field("objects", "at most " + std::to_string(options_.max_objects) +
                                       " objects are supported");
    }
    PairingPolicy policy = PairingPolicy::sequential;
    if (body.contains("pairing_policy")) {
        if (!body["pairing_policy"].is_string()) {
            throw bad_field("pairing_policy", "'pairing_policy' must be a string");
        }
        policy = pairing_policy_from_string(body["pairing_policy"].get<std::string>());
    }
    ElicitationConfig config;
    config.card_cap = options_.default_card_cap;
    if (body.contains("allow_ties")) {
        if (!body["allow_ties"].is_boolean()) {
            throw bad_field("allow_ties", "'allow_ties' must be a boolean");
        }
        config.allow_ties = body["allow_ties"].get<bool>();
    }
    if (body.contains("card_cap")) {
        const auto& cap = body["card_cap"];
        if (cap.is_null()) {
            config.card_cap = std::nullopt;
        } else if (cap.is_number_integer() && cap.get<Units>() >= 0) {
            config.card_cap = cap.get<Units>();
        } else {
            throw bad_field("card_cap", "'card_cap' must be a non-negative integer or null");
        }
    }
    const Session session = store_.save(start_session(ObjectSet(std::move(names)), policy, config));
    return session_response(201, session, {{"pairings", pairings_view(session)}});
}

ApiResponse Service::dispatch(const ApiRequest& request, const std::string& id,
                              const std::string& action) {
    const auto& method = request.method;
    if (method == "GET") {
        const auto session = store_.load(id);
        if (!session) {
            throw Error(ErrorCode::not_found, "no session '" + id + "'", "session_id");
        }
        if (action.empty()) {
            return session_response(200, *session, {{"objects", session->objects().names()}});
        }
        if (action == "pairings") {
            return session_response(200, *session, {{"pairings", pairings_view(*session)}});
        }
        if (action == "results") {
            return session_response(200, *session, results_view(*session));
        }
        if (action == "results/export") {
            auto response = json_response(200, export_results(*session));
            response.headers["ETag"] = "\"" + std::to_string(session->version) + "\"";
            return response;
        }
        throw Error(ErrorCode::not_found, "no route for GET " + request.path);
    }
    if (method != "POST") {
        throw Error(ErrorCode::not_found, "no route for " + method + " " + request.path);
    }

    json body;
    try {
        body = json::parse(request.body.empty() ? "{}" : request.body);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::parse, std::string("malformed JSON body: ") + e.what());
    }
    if (!body.is_object()) {
        throw Error(ErrorCode::parse, "request body must be a JSON object");
    }

    std::function<Session(const Session&)> mutate;
    std::function<json(const Session&)> view;
    if (action == "pairings") {
        mutate = [&](const Session& s) {
            const auto& pairs = require(body, "pairs");
            if (!pairs.is_array()) {
                throw bad_field("pairs", "'pairs' must be an array");
            }
            std::vector<ProposedPair> proposed;
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                const auto field = "pairs/" + std::to_string(i);
                const auto& p = pairs[i];
                if (!p.is_array() || p.empty() || p.size() > 2) {
                    throw bad_field(field, "each pair lists one or two names");
                }
                ProposedPair pair{require_object(s, p[0], field + "/0"), std::nullopt};
                if (p.size() == 2) {
                    pair.second = require_object(s, p[1], field + "/1");
                }
                proposed.push_back(pair);
            }
            return submit_pairings(s, proposed);
        };
        view = [](const Session& s) { return json{{"pairings", pairings_view(s)}}; };
    } else if (action == "matches") {
        mutate = [&](const Session& s) {
            if (s.phase != Phase::eliciting) {
                throw Error(ErrorCode::conflict, "match submission is not allowed in phase '" +
                                                     std::string(to_string(s.phase)) + "'",
                            "phase");
            }
            const auto pairing_id = require_index(body, "pairing_id");
            if (body.contains("tie") && body["tie"] == true) {
                return submit_tie(s, pairing_id);
            }
            const ObjectId winner = require_object(s, require(body, "winner"), "winner");
            return submit_match(s, pairing_id, winner, require_int(body, "cards"));
        };
        view = [](const Session& s) {
            json out = {{"pairings", pairings_view(s)}};
            if (s.scale) {
                out["results"] = tournament_results(s);
            }
            return out;
        };
    } else if (action == "ranking") {
        mutate = [&](const Session& s) {
            const auto& order = require(body, "order");
            if (!order.is_array()) {
                throw bad_field("order", "'order' must be an array of names");
            }
            std::vector<ObjectId> ids;
            for (std::size_t i = 0; i < order.size(); ++i) {
                ids.push_back(require_object(s, order[i], "order/" + std::to_string(i)));
            }
            return revise_ranking(s, ids);
        };
        view = results_view;
    } else if (action == "cards") {
        mutate = [&](const Session& s) {
            return revise_cards(s, require_index(body, "gap_index"), require_int(body, "cards"));
        };
        view = results_view;
    } else if (action == "accept") {
        mutate = [](const Session& s) { return accept(s); };
        view = [](const Session& s) { return json{{"final_results", export_results(s)}}; };
    } else {
        throw Error(ErrorCode::not_found, "no route for POST " + request.path);
    }

    const Session updated = store_.update(id, [&](const Session& current) {
        check_expected_version(current, request, body);
        return mutate(current);
    });
    return session_response(200, updated, view(updated));
}

} // namespace ttm
