/**
 * @file password.hpp
 * @brief Salted memory-hard password digests (Argon2id via libsodium)
 */

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace rxtropic::auth {

inline constexpr std::size_t min_password_length = 8;

/// Work factor. `minimal` exists for tests and benchmarks only.
enum class HashCost { interactive, moderate, minimal };

class PasswordHasher {
public:
    explicit PasswordHasher(HashCost cost = HashCost::interactive);

    /// Self-describing digest string; a fresh salt is drawn on every call.
    std::string digest(std::string_view password) const;

    /// Verifies against any digest produced by digest(), whatever its cost.
    bool verify(std::string_view digest, std::string_view password) const;

private:
    unsigned long long ops_limit_;
    std::size_t mem_limit_;
};

/// Throws Error(WEAK_PASSWORD) below min_password_length characters.
void require_strong(std::string_view password);

}  // namespace rxtropic::auth
