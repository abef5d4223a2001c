/// @file service.hpp
/// @brief JSON session API driving the elicitation workflow.
///
/// `Service` is transport independent: it maps a method, path and body onto
/// a status and JSON body. `HttpServer` binds it to HTTP/1.1 and optionally
/// serves a static web bundle.
///
/// Routes (all bodies JSON):
///   POST /api/sessions                      {objects, pairing_policy?, allow_ties?, card_cap?}
///   GET  /api/sessions/{id}
///   GET  /api/sessions/{id}/pairings
///   POST /api/sessions/{id}/pairings        {pairs: [[a, b], [c]]}      explicit policy only
///   POST /api/sessions/{id}/matches         {pairing_id, winner, cards} | {pairing_id, tie: true}
///   GET  /api/sessions/{id}/results
///   GET  /api/sessions/{id}/results/export  raw results document
///   POST /api/sessions/{id}/ranking         {order: [names]}
///   POST /api/sessions/{id}/cards           {gap_index, cards}
///   POST /api/sessions/{id}/accept
///
/// Mutations accept an optional expected "version" (body field or If-Match
/// header); a stale version yields 409 version_conflict. Every session
/// response carries the new version. Errors use
/// {"error": {"code", "message", "field"?}}.

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "json.hpp"
#include "ttm/error.hpp"
#include "ttm/session_store.hpp"

namespace ttm {

struct ServiceOptions {
    std::size_t max_objects = 64;
    /// Card cap applied when the create request does not set one.
    std::optional<Units> default_card_cap = 100;
};

struct ApiRequest {
    std::string method;
    std::string path;
    std::string body;
    std::map<std::string, std::string> headers;
};

struct ApiResponse {
    int status = 200;
    /// Serialized body; JSON unless content_type says otherwise.
    std::string body;
    std::string content_type = "application/json";
    std::map<std::string, std::string> headers;
};

class Service {
public:
    explicit Service(SessionStore& store, ServiceOptions options = {});

    ApiResponse handle(const ApiRequest& request);

private:
    ApiResponse create_session(const nlohmann::json& body);
    ApiResponse dispatch(const ApiRequest& request, const std::string& id,
                         const std::string& action);

    SessionStore& store_;
    ServiceOptions options_;
};

int http_status(ErrorCode code);
ApiResponse error_response(const Error& error);

class HttpServer {
public:
    explicit HttpServer(Service& service, std::optional<std::filesystem::path> web_root = {});
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds to `port` (0 picks a free port) and returns the bound port.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace ttm
