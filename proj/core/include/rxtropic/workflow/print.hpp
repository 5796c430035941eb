/**
 * @file print.hpp
 * @brief Plain-text printed copy of a prescription
 *
 * Layout (UTF-8, LF line endings, trailing LF):
 *
 *     RXTROPIC PRESCRIPTION <id>
 *     PATIENT: <full_name> DOB:<YYYY-MM-DD>
 *     PRESCRIBER: <full_name> LIC:<license_number>
 *     DIAGNOSIS: <disease name>
 *     - <drug name> | <dose> | <frequency> | <duration_days>d | <instructions>
 *     ...
 *     PRINTED: <ISO-8601 UTC timestamp>
 */

#pragma once

#include "rxtropic/domain/types.hpp"

#include <map>
#include <string>

namespace rxtropic::workflow {

struct PrintInput {
    const Prescription& prescription;
    const Patient& patient;
    const PractitionerAccount& prescriber;
    const Disease& diagnosis;
    const std::map<Id, Drug>& drugs;  ///< must cover every item
};

std::string render_print(const PrintInput& input, Timestamp printed_at);

}  // namespace rxtropic::workflow
