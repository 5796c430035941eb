/**
 * @file server_main.cpp
 * @brief rxtropic-server: HTTP service entry point
 *
 * Every option can also come from the environment; a flag on the command
 * line wins over its variable.
 */

#include "rxtropic/api/server.hpp"
#include "rxtropic/domain/error.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <charconv>
#include <iostream>
#include <thread>

namespace {

/// "90", "90s", "15m" or "8h".
std::optional<std::chrono::milliseconds> parse_duration(const std::string& text) {
    if (text.empty()) return std::nullopt;
    long long value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || value <= 0) return std::nullopt;
    const std::string_view unit(end, text.data() + text.size() - end);
    using namespace std::chrono;
    if (unit.empty() || unit == "s") return duration_cast<milliseconds>(seconds{value});
    if (unit == "m") return duration_cast<milliseconds>(minutes{value});
    if (unit == "h") return duration_cast<milliseconds>(hours{value});
    return std::nullopt;
}

bool split_bind(const std::string& bind, std::string& host, int& port) {
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos) return false;
    host = bind.substr(0, colon);
    const auto digits = bind.substr(colon + 1);
    auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
    return ec == std::errc{} && end == digits.data() + digits.size() && port >= 0 && port <= 65535 &&
           !host.empty();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rxtropic e-prescription service"};
    std::string bind = "127.0.0.1:8080";
    std::string store_dir;
    std::string session_ttl = "8h";
    int window_days = 30;
    std::string static_dir;

    app.add_option("--bind", bind, "host:port to listen on (port 0 picks one)")
        ->envname("RXTROPIC_BIND")
        ->capture_default_str();
    app.add_option("--store", store_dir, "store directory")->envname("RXTROPIC_STORE")->required();
    app.add_option("--session-ttl", session_ttl, "session lifetime: seconds, or N[s|m|h]")
        ->envname("RXTROPIC_SESSION_TTL")
        ->capture_default_str();
    app.add_option("--duplicate-window-days", window_days, "duplicate-therapy window")
        ->envname("RXTROPIC_DUPLICATE_WINDOW_DAYS")
        ->check(CLI::Range(1, 3650))
        ->capture_default_str();
    app.add_option("--static-dir", static_dir, "directory served under /")
        ->envname("RXTROPIC_STATIC_DIR");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    rxtropic::api::ServerConfig server_config;
    if (!split_bind(bind, server_config.host, server_config.port)) {
        std::cerr << "error: --bind must be host:port, got '" << bind << "'\n";
        return 2;
    }
    const auto ttl = parse_duration(session_ttl);
    if (!ttl) {
        std::cerr << "error: --session-ttl must be a positive duration, got '" << session_ttl << "'\n";
        return 2;
    }
    if (!static_dir.empty()) server_config.static_dir = static_dir;

    rxtropic::api::ApplicationConfig config;
    config.store_dir = store_dir;
    config.auth.session_ttl = *ttl;
    config.workflow.duplicate_window_days = window_days;

    // Block the stop signals before any thread starts so only the waiter sees them.
    sigset_t stop_signals;
    sigemptyset(&stop_signals);
    sigaddset(&stop_signals, SIGINT);
    sigaddset(&stop_signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

    rxtropic::SystemClock clock;
    try {
        rxtropic::api::Application application(config, clock);
        rxtropic::api::ApiServer server(application, server_config);
        const int port = server.bind();

        std::thread([&server, stop_signals] {
            int signal = 0;
            sigwait(&stop_signals, &signal);
            server.stop();
        }).detach();

        std::cout << "rxtropic-server listening on " << server_config.host << ":" << port
                  << " (store " << store_dir << ")" << std::endl;
        server.listen();
        std::cout << "rxtropic-server stopped" << std::endl;
    } catch (const rxtropic::Error& e) {
        std::cerr << "error: " << rxtropic::to_string(e.code()) << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
