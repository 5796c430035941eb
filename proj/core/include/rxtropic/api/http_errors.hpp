/**
 * @file http_errors.hpp
 * @brief Fixed mapping from error codes to HTTP responses
 */

#pragma once

#include "rxtropic/domain/error.hpp"

#include <nlohmann/json.hpp>

namespace rxtropic::api {

/// 401, 403, 404, 409 or 422 for contract errors; 5xx only for store faults.
int http_status(ErrorCode code) noexcept;

/// {"code": ..., "message": ..., "findings": [...]}; findings only when present.
nlohmann::json error_body(const Error& error);

}  // namespace rxtropic::api
