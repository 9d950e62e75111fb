#pragma once

#include "mathforge/controls.hpp"
#include "mathforge/esengine.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mathforge::service {

struct ApiResponse {
    int status = 200;
    std::string content_type = "application/json; charset=utf-8";
    std::string body;
};

/// Error body: {"error": {"code", "message", "details"}}.
struct ApiError {
    int status;
    std::string code;
    std::string message;
    std::string details_json = "null";
};

using Clock = std::chrono::steady_clock;

/// Bundled and uploaded knowledge bases, addressed by id. Bundled KBs use
/// the file stem; uploads use a hash of their canonical text.
class KbRegistry {
public:
    struct Entry {
        std::string id;
        std::shared_ptr<const kb::KnowledgeBase> kb;
    };

    /// Loads every *.kb file in dir; returns the number loaded.
    std::size_t load_dir(const std::filesystem::path& dir);
    /// Parses and registers kb text; returns the id. Throws KbError.
    std::string add(std::string_view text, std::optional<std::string> id = std::nullopt);
    std::shared_ptr<const kb::KnowledgeBase> find(std::string_view id) const;
    std::vector<Entry> list() const;

private:
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<const kb::KnowledgeBase>, std::less<>> kbs_;
};

/// In-memory consultations with idle expiry. Each session has its own
/// mutex; the store lock is held only to find or insert entries.
class SessionStore {
public:
    explicit SessionStore(std::chrono::seconds idle_timeout = std::chrono::minutes(30),
                          std::function<Clock::time_point()> now = Clock::now);

    struct Entry {
        Entry(std::string kb_id, es::Session session, Clock::time_point last_activity);
        std::mutex mutex;
        std::string kb_id;
        es::Session session;
        Clock::time_point last_activity;
    };

    std::string create(std::string kb_id, es::Session session);
    /// Runs fn under the session's own lock; false if the id is unknown or expired.
    bool with(std::string_view id, const std::function<void(Entry&)>& fn);
    std::size_t size();
    /// Drops sessions idle longer than the timeout.
    void sweep();

private:
    std::string new_id();

    std::chrono::seconds idle_timeout_;
    std::function<Clock::time_point()> now_;
    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Entry>, std::less<>> sessions_;
};

struct ApiOptions {
    std::filesystem::path kb_dir;
    std::filesystem::path static_dir;
    std::chrono::seconds idle_timeout = std::chrono::minutes(30);
    std::function<Clock::time_point()> now = Clock::now;
};

/// The JSON API, independent of any HTTP library: handle() takes a method,
/// a path (without query string) and a body, and returns the response.
class Api {
public:
    explicit Api(ApiOptions options = {});

    ApiResponse handle(std::string_view method, std::string_view path, std::string_view body);

    KbRegistry& kbs() { return kbs_; }
    SessionStore& sessions() { return sessions_; }
    const std::filesystem::path& static_dir() const { return options_.static_dir; }

private:
    ApiResponse route(std::string_view method, const std::vector<std::string>& parts, std::string_view body);
    ApiResponse post_worksheet(std::string_view body);
    ApiResponse create_consultation(std::string_view body);
    ApiResponse consultation(std::string_view method, const std::string& id, const std::string& verb, std::string_view body);

    ApiOptions options_;
    KbRegistry kbs_;
    SessionStore sessions_;
};

/// The request form for worksheets, as a controls panel.
controls::ControlPanel worksheet_form_panel();

/// HTTP adapter over an Api: routes /api/* and /healthz to Api::handle and
/// serves static files from the Api's static_dir under /.
class HttpServer {
public:
    explicit HttpServer(Api& api);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds host:port (0 picks a free port); returns the bound port, or -1.
    int bind(const std::string& host, int port);
    /// Blocks serving requests until stop().
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace mathforge::service
