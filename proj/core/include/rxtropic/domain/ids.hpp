/**
 * @file ids.hpp
 * @brief Random identifiers and session tokens
 */

#pragma once

#include "rxtropic/domain/types.hpp"

#include <cstddef>
#include <string>

namespace rxtropic {

/// 128-bit random id as 32 lowercase hex digits.
Id new_id();

/// Lowercase hex of `bytes` random bytes from the OS CSPRNG.
std::string random_hex(std::size_t bytes);

}  // namespace rxtropic
