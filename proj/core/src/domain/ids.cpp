#include "rxtropic/domain/ids.hpp"

#include <sodium.h>

#include <stdexcept>
#include <vector>

namespace rxtropic {

namespace {

void ensure_sodium() {
    static const bool ready = [] { return sodium_init() >= 0; }();
    if (!ready) {
        throw std::runtime_error("libsodium initialization failed");
    }
}

}  // namespace

std::string random_hex(std::size_t bytes) {
    ensure_sodium();
    std::vector<unsigned char> raw(bytes);
    randombytes_buf(raw.data(), raw.size());
    std::string hex(bytes * 2 + 1, '\0');
    sodium_bin2hex(hex.data(), hex.size(), raw.data(), raw.size());
    hex.pop_back();
    return hex;
}

Id new_id() { return random_hex(16); }

}  // namespace rxtropic
