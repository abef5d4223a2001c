/// @file http_server.cpp
/// @brief cpp-httplib binding for Service.

#include "httplib.h"
#include "ttm/service.hpp"

namespace ttm {

struct HttpServer::Impl {
    httplib::Server server;
};

HttpServer::HttpServer(Service& service, std::optional<std::filesystem::path> web_root)
    : impl_(std::make_unique<Impl>()) {
    auto& server = impl_->server;
    const auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
        ApiRequest request{req.method, req.path, req.body, {}};
        if (req.has_header("If-Match")) {
            request.headers["If-Match"] = req.get_header_value("If-Match");
        }
        const auto response = service.handle(request);
        res.status = response.status;
        for (const auto& [key, value] : response.headers) {
            res.set_header(key, value);
        }
        res.set_content(response.body, response.content_type);
    };
    const std::string pattern = R"(/api/.*)";
    server.Get(pattern, handler);
    server.Post(pattern, handler);
    if (web_root) {
        server.set_mount_point("/", web_root->string());
    }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        return impl_->server.bind_to_any_port(host);
    }
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) {
        impl_->server.stop();
    }
}

} // namespace ttm
