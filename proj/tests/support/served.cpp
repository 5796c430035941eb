#include "served.hpp"

#include <chrono>
#include <stdexcept>

namespace rxtropic::testing {

Served::Served(api::Application& app) : server_(app, {.host = "127.0.0.1", .port = 0}) {
    server_.bind();
    thread_ = std::thread([this] { server_.listen(); });
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds{10};
    while (!server_.running()) {
        if (std::chrono::steady_clock::now() > deadline) throw std::runtime_error("server did not start");
        std::this_thread::sleep_for(std::chrono::milliseconds{1});
    }
}

Served::~Served() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
}

httplib::Client Served::client() const {
    return httplib::Client("127.0.0.1", port());
}

httplib::Headers ApiClient::headers() const {
    if (token.empty()) return {};
    return {{"Authorization", "Bearer " + token}};
}

ApiResponse ApiClient::wrap(const httplib::Result& result) {
    ApiResponse out;
    if (!result) throw std::runtime_error("HTTP request failed: " + httplib::to_string(result.error()));
    out.status = result->status;
    out.text = result->body;
    out.body = nlohmann::json::parse(result->body, nullptr, false);
    return out;
}

ApiResponse ApiClient::get(const std::string& path) {
    return wrap(http_.Get(path, headers()));
}

ApiResponse ApiClient::post(const std::string& path, const nlohmann::json& body) {
    return post_raw(path, body.dump());
}

ApiResponse ApiClient::post_raw(const std::string& path, const std::string& body) {
    return wrap(http_.Post(path, headers(), body, "application/json"));
}

ApiResponse ApiClient::put(const std::string& path, const nlohmann::json& body) {
    return wrap(http_.Put(path, headers(), body.dump(), "application/json"));
}

ApiResponse ApiClient::del(const std::string& path) {
    return wrap(http_.Delete(path, headers()));
}

ApiResponse ApiClient::login(const std::string& license, const std::string& password) {
    auto response = post("/v1/login", {{"license_number", license}, {"password", password}});
    if (response.status == 200) token = response.body.at("token").get<std::string>();
    return response;
}

}  // namespace rxtropic::testing
