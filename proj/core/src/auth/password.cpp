#include "rxtropic/auth/password.hpp"

#include "rxtropic/domain/error.hpp"

#include <sodium.h>

#include <stdexcept>

namespace rxtropic::auth {

PasswordHasher::PasswordHasher(HashCost cost) {
    if (sodium_init() < 0) {
        throw std::runtime_error("libsodium initialization failed");
    }
    switch (cost) {
        case HashCost::interactive:
            ops_limit_ = crypto_pwhash_OPSLIMIT_INTERACTIVE;
            mem_limit_ = crypto_pwhash_MEMLIMIT_INTERACTIVE;
            break;
        case HashCost::moderate:
            ops_limit_ = crypto_pwhash_OPSLIMIT_MODERATE;
            mem_limit_ = crypto_pwhash_MEMLIMIT_MODERATE;
            break;
        case HashCost::minimal:
            ops_limit_ = crypto_pwhash_OPSLIMIT_MIN;
            mem_limit_ = crypto_pwhash_MEMLIMIT_MIN;
            break;
    }
}

std::string PasswordHasher::digest(std::string_view password) const {
    char out[crypto_pwhash_STRBYTES];
    if (crypto_pwhash_str(out, password.data(), password.size(), ops_limit_, mem_limit_) != 0) {
        throw Error(ErrorCode::internal, "password hashing ran out of memory");
    }
    return out;
}

bool PasswordHasher::verify(std::string_view digest, std::string_view password) const {
    if (digest.empty() || digest.size() >= crypto_pwhash_STRBYTES) {
        return false;
    }
    std::string terminated(digest);
    return crypto_pwhash_str_verify(terminated.c_str(), password.data(), password.size()) == 0;
}

void require_strong(std::string_view password) {
    if (password.size() < min_password_length) {
        throw Error(ErrorCode::weak_password,
                    "password must be at least " + std::to_string(min_password_length) +
                        " characters");
    }
}

}  // namespace rxtropic::auth
