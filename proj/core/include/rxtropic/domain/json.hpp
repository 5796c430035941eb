/**
 * @file json.hpp
 * @brief JSON mapping for domain records
 *
 * Used both by the store (record bodies) and by the HTTP API. Timestamps are
 * ISO-8601 UTC strings, dates are YYYY-MM-DD, enums use their wire names.
 * from_json throws Error(VALIDATION) on malformed input.
 */

#pragma once

#include "rxtropic/domain/error.hpp"
#include "rxtropic/domain/types.hpp"

#include <nlohmann/json.hpp>

namespace rxtropic {

void to_json(nlohmann::json& j, const PractitionerAccount& v);
void from_json(const nlohmann::json& j, PractitionerAccount& v);
void to_json(nlohmann::json& j, const Patient& v);
void from_json(const nlohmann::json& j, Patient& v);
void to_json(nlohmann::json& j, const Disease& v);
void from_json(const nlohmann::json& j, Disease& v);
void to_json(nlohmann::json& j, const Drug& v);
void from_json(const nlohmann::json& j, Drug& v);
void to_json(nlohmann::json& j, const InteractionRule& v);
void from_json(const nlohmann::json& j, InteractionRule& v);
void to_json(nlohmann::json& j, const PrescriptionItem& v);
void from_json(const nlohmann::json& j, PrescriptionItem& v);
void to_json(nlohmann::json& j, const ValidationFinding& v);
void from_json(const nlohmann::json& j, ValidationFinding& v);
void to_json(nlohmann::json& j, const OverrideRecord& v);
void from_json(const nlohmann::json& j, OverrideRecord& v);
void to_json(nlohmann::json& j, const Prescription& v);
void from_json(const nlohmann::json& j, Prescription& v);

/// Account view safe to return to clients (no password digest).
nlohmann::json public_view(const PractitionerAccount& account);

}  // namespace rxtropic
