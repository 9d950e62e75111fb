#include "mathforge/service.hpp"

#include <httplib.h>

namespace mathforge::service {

struct HttpServer::Impl {
    explicit Impl(Api& a) : api(a) {}
    Api& api;
    httplib::Server server;
};

HttpServer::HttpServer(Api& api) : impl_(std::make_unique<Impl>(api)) {
    auto& srv = impl_->server;
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        auto r = impl_->api.handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    for (const char* pattern : {"/api/.*", "/healthz"}) {
        srv.Get(pattern, forward);
        srv.Post(pattern, forward);
    }
    if (!api.static_dir().empty()) srv.set_mount_point("/", api.static_dir().string());
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) impl_->server.stop();
}

}  // namespace mathforge::service
