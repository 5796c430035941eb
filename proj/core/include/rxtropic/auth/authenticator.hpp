/**
 * @file authenticator.hpp
 * @brief License-number login, bearer sessions, and authorization
 *
 * Sessions live in memory behind a shared mutex: authorize takes a shared
 * lock, login and logout take the exclusive lock only to insert or erase.
 * Password verification happens outside the lock so a slow hash never stalls
 * concurrent authorization.
 */

#pragma once

#include "rxtropic/auth/password.hpp"
#include "rxtropic/auth/permissions.hpp"
#include "rxtropic/domain/time.hpp"
#include "rxtropic/store/store.hpp"

#include <chrono>
#include <shared_mutex>
#include <string>
#include <unordered_map>

namespace rxtropic::auth {

struct Session {
    std::string token;
    Id account_id;
    Role role = Role::doctor;
    Timestamp issued_at{};
    Timestamp expires_at{};
};

struct AuthConfig {
    std::chrono::milliseconds session_ttl = std::chrono::hours{8};
};

class Authenticator {
public:
    Authenticator(store::Store& store, const Clock& clock, const PasswordHasher& hasher,
                  AuthConfig config = {});

    /// INVALID_CREDENTIALS for unknown, inactive, or wrong password alike.
    /// The audit log records which one it was.
    Session login(std::string_view license_number, std::string_view password);

    /// Idempotent.
    void logout(std::string_view token);

    /// Live session identity, or UNAUTHENTICATED.
    Actor authenticate(std::string_view token) const;

    /// UNAUTHENTICATED for bad or expired tokens, FORBIDDEN when the matrix denies.
    Actor authorize(std::string_view token, Permission permission) const;

    /// Replaces the digest and revokes every other session of the account.
    void change_password(std::string_view token, std::string_view old_password,
                         std::string_view new_password);

    /// Drops all sessions of an account (deactivation, password reset).
    void revoke_account(const Id& account_id, std::string_view keep_token = {});

    std::size_t live_sessions() const;

private:
    std::optional<Session> lookup(std::string_view token) const;

    store::Store& store_;
    const Clock& clock_;
    const PasswordHasher& hasher_;
    AuthConfig config_;

    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, Session> sessions_;
};

}  // namespace rxtropic::auth
