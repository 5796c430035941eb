/**
 * @file error.hpp
 * @brief Error codes shared by every module and the exception that carries them
 */

#pragma once

#include "rxtropic/domain/types.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rxtropic {

enum class ErrorCode {
    invalid_credentials,
    unauthenticated,
    forbidden,
    weak_password,
    not_found,
    unknown_patient,
    unknown_drug,
    unknown_disease,
    unique_violation,
    conflict,
    wrong_state,
    validation,
    blocked,
    overrides_required,
    not_prescriber,
    not_acknowledging_pharmacist,
    already_bootstrapped,
    parse_error,
    reference_error,
    store_unavailable,
    internal,
};

/// Upper-snake wire name, e.g. "OVERRIDES_REQUIRED".
std::string_view to_string(ErrorCode code) noexcept;

/**
 * @brief Contract failure raised by service operations.
 *
 * BLOCKED and OVERRIDES_REQUIRED carry the findings that caused the rejection.
 */
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::vector<ValidationFinding> findings = {});

    ErrorCode code() const noexcept { return code_; }
    const std::vector<ValidationFinding>& findings() const noexcept { return findings_; }

private:
    ErrorCode code_;
    std::vector<ValidationFinding> findings_;
};

}  // namespace rxtropic
