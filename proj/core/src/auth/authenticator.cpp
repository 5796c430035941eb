#include "rxtropic/auth/authenticator.hpp"

#include "rxtropic/domain/error.hpp"
#include "rxtropic/domain/ids.hpp"

#include <mutex>

namespace rxtropic::auth {

namespace {

[[noreturn]] void invalid_credentials() {
    throw Error(ErrorCode::invalid_credentials, "invalid license number or password");
}

}  // namespace

Authenticator::Authenticator(store::Store& store, const Clock& clock, const PasswordHasher& hasher,
                             AuthConfig config)
    : store_(store), clock_(clock), hasher_(hasher), config_(config) {}

Session Authenticator::login(std::string_view license_number, std::string_view password) {
    const auto account = store_.snapshot().find_account_by_license(license_number);

    std::string cause;
    if (!account) {
        // Spend comparable time so unknown accounts are not distinguishable by latency.
        static const std::string decoy = hasher_.digest("decoy-password");
        hasher_.verify(decoy, password);
        cause = "unknown_account";
    } else if (!hasher_.verify(account->password_digest, password)) {
        cause = "wrong_password";
    } else if (!account->active) {
        cause = "inactive";
    }

    const auto now = clock_.now();
    if (!cause.empty()) {
        store_.audit_append({now, account ? account->id : std::string(store::system_actor),
                             "auth.login_failed", "account",
                             account ? account->id : name_key(license_number),
                             nlohmann::json{{"cause", cause}}});
        invalid_credentials();
    }

    Session session{random_hex(32), account->id, account->role, now, now + config_.session_ttl};
    {
        std::unique_lock lock(mutex_);
        std::erase_if(sessions_, [now](const auto& kv) { return kv.second.expires_at <= now; });
        sessions_.emplace(session.token, session);
    }
    store_.audit_append({now, account->id, "auth.login", "account", account->id,
                         nlohmann::json::object()});
    return session;
}

void Authenticator::logout(std::string_view token) {
    std::optional<Session> removed;
    {
        std::unique_lock lock(mutex_);
        auto it = sessions_.find(std::string(token));
        if (it == sessions_.end()) return;
        removed = it->second;
        sessions_.erase(it);
    }
    store_.audit_append({clock_.now(), removed->account_id, "auth.logout", "account",
                         removed->account_id, nlohmann::json::object()});
}

std::optional<Session> Authenticator::lookup(std::string_view token) const {
    if (token.empty()) return std::nullopt;
    std::shared_lock lock(mutex_);
    auto it = sessions_.find(std::string(token));
    if (it == sessions_.end() || it->second.expires_at <= clock_.now()) {
        return std::nullopt;
    }
    return it->second;
}

Actor Authenticator::authenticate(std::string_view token) const {
    auto session = lookup(token);
    if (!session) {
        throw Error(ErrorCode::unauthenticated, "missing, unknown, or expired session token");
    }
    return Actor{session->account_id, session->role};
}

Actor Authenticator::authorize(std::string_view token, Permission permission) const {
    auto actor = authenticate(token);
    require(actor, permission);
    return actor;
}

void Authenticator::change_password(std::string_view token, std::string_view old_password,
                                    std::string_view new_password) {
    const auto actor = authenticate(token);
    auto account = store_.snapshot().get_account(actor.account_id);
    if (!hasher_.verify(account.password_digest, old_password)) {
        invalid_credentials();
    }
    require_strong(new_password);
    const auto digest = hasher_.digest(new_password);

    store_.write([&](store::Transaction& txn) {
        auto current = txn.get_account(actor.account_id);
        current.password_digest = digest;
        txn.put(current);
        txn.append_audit({clock_.now(), actor.account_id, "account.password_change", "account",
                          actor.account_id, nlohmann::json::object()});
    });
    revoke_account(actor.account_id, token);
}

void Authenticator::revoke_account(const Id& account_id, std::string_view keep_token) {
    std::unique_lock lock(mutex_);
    std::erase_if(sessions_, [&](const auto& kv) {
        return kv.second.account_id == account_id && kv.first != keep_token;
    });
}

std::size_t Authenticator::live_sessions() const {
    const auto now = clock_.now();
    std::shared_lock lock(mutex_);
    std::size_t live = 0;
    for (const auto& [token, session] : sessions_) {
        if (session.expires_at > now) ++live;
    }
    return live;
}

}  // namespace rxtropic::auth
