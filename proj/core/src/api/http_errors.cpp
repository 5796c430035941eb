#include "rxtropic/api/http_errors.hpp"

#include "rxtropic/domain/json.hpp"

namespace rxtropic::api {

int http_status(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_credentials:
        case ErrorCode::unauthenticated:
            return 401;
        case ErrorCode::forbidden:
        case ErrorCode::not_prescriber:
        case ErrorCode::not_acknowledging_pharmacist:
            return 403;
        case ErrorCode::not_found:
        case ErrorCode::unknown_patient:
        case ErrorCode::unknown_drug:
        case ErrorCode::unknown_disease:
            return 404;
        case ErrorCode::unique_violation:
        case ErrorCode::conflict:
        case ErrorCode::wrong_state:
        case ErrorCode::blocked:
        case ErrorCode::overrides_required:
        case ErrorCode::already_bootstrapped:
            return 409;
        case ErrorCode::weak_password:
        case ErrorCode::validation:
        case ErrorCode::parse_error:
        case ErrorCode::reference_error:
            return 422;
        case ErrorCode::store_unavailable:
            return 503;
        case ErrorCode::internal:
            return 500;
    }
    return 500;
}

nlohmann::json error_body(const Error& error) {
    nlohmann::json body{{"code", to_string(error.code())}, {"message", error.what()}};
    if (!error.findings().empty()) body["findings"] = error.findings();
    return body;
}

}  // namespace rxtropic::api
