/**
 * @file server.hpp
 * @brief HTTP+JSON front end under /v1, plus static assets under /
 *
 * Every route except GET /healthz and POST /v1/login needs an
 * "Authorization: Bearer <token>" header. Authentication and the route's
 * permission are checked before the request body is parsed, so a caller
 * without the right role never learns whether its payload was well formed.
 * Errors are JSON bodies of the form {"code", "message", "findings"?}.
 */

#pragma once

#include "rxtropic/api/application.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace rxtropic::api {

struct ServerConfig {
    std::string host = "127.0.0.1";
    int port = 8080;  ///< 0 picks a free port
    /// Directory served under "/" when set.
    std::optional<std::filesystem::path> static_dir;
};

class ApiServer {
public:
    ApiServer(Application& app, ServerConfig config);
    ~ApiServer();

    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    /// Binds the socket and returns the port. Throws std::runtime_error when
    /// the address is unavailable.
    int bind();

    /// Serves until stop(); bind() must have succeeded.
    void listen();

    /// Stops accepting; requests already running complete. Thread-safe.
    void stop();

    bool running() const;
    int port() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace rxtropic::api
