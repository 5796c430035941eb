/**
 * @file validation.cpp
 * @brief Value-level invariant checks for every domain record
 */

#include "rxtropic/domain/validation.hpp"

#include "rxtropic/domain/error.hpp"

#include <set>

namespace rxtropic {

namespace {

bool blank(std::string_view text) { return normalize_code(text).empty(); }

}  // namespace

bool is_legal_transition(PrescriptionStatus from, PrescriptionStatus to) noexcept {
    using S = PrescriptionStatus;
    switch (from) {
        case S::draft:
            return to == S::sent || to == S::cancelled;
        case S::sent:
            return to == S::acknowledged || to == S::cancelled;
        case S::acknowledged:
            return to == S::dispensed;
        case S::dispensed:
        case S::cancelled:
            return false;
    }
    return false;
}

bool is_terminal(PrescriptionStatus status) noexcept {
    return status == PrescriptionStatus::dispensed || status == PrescriptionStatus::cancelled;
}

std::vector<std::string> validate_entity(const PractitionerAccount& account) {
    std::vector<std::string> out;
    if (blank(account.full_name)) out.emplace_back("full_name must be nonempty");
    if (blank(account.license_number)) out.emplace_back("license_number must be nonempty");
    if (account.password_digest.empty()) out.emplace_back("password_digest must be set");
    return out;
}

std::vector<std::string> validate_entity(const Patient& patient, Date today) {
    std::vector<std::string> out;
    if (blank(patient.full_name)) out.emplace_back("full_name must be nonempty");
    if (!patient.date_of_birth.ok()) {
        out.emplace_back("date_of_birth must be a valid date");
    } else if (patient.date_of_birth > today) {
        out.emplace_back("date_of_birth must not be in the future");
    }
    for (const auto& code : patient.allergies) {
        if (code.empty() || code != normalize_code(code)) {
            out.emplace_back("allergy codes must be nonempty and normalized");
            break;
        }
    }
    return out;
}

std::vector<std::string> validate_entity(const Disease& disease) {
    std::vector<std::string> out;
    if (blank(disease.name)) out.emplace_back("name must be nonempty");
    return out;
}

std::vector<std::string> validate_entity(const Drug& drug) {
    std::vector<std::string> out;
    if (blank(drug.name)) out.emplace_back("name must be nonempty");
    for (const auto& code : drug.substance_codes) {
        if (code.empty() || code != normalize_code(code)) {
            out.emplace_back("substance codes must be nonempty and normalized");
            break;
        }
    }
    return out;
}

std::vector<std::string> validate_entity(const InteractionRule& rule) {
    std::vector<std::string> out;
    if (rule.drug_pair.first().empty() || rule.drug_pair.second().empty()) {
        out.emplace_back("pair drugs must be set");
    } else if (rule.drug_pair.first() == rule.drug_pair.second()) {
        out.emplace_back("pair drugs must be distinct");
    }
    return out;
}

std::vector<std::string> validate_entity(const PrescriptionItem& item) {
    std::vector<std::string> out;
    if (item.drug_id.empty()) out.emplace_back("item drug_id must be set");
    if (item.duration_days < 1) out.emplace_back("duration_days must be at least 1");
    return out;
}

std::vector<std::string> validate_entity(const ValidationFinding& finding) {
    std::vector<std::string> out;
    if (finding.subject_drug_ids.empty()) {
        out.emplace_back("subject_drug_ids must be nonempty");
    }
    if (finding.kind == FindingKind::allergy && finding.severity != FindingSeverity::block) {
        out.emplace_back("allergy findings must be BLOCK");
    }
    return out;
}

std::vector<std::string> validate_entity(const OverrideRecord& record) {
    std::vector<std::string> out;
    if (blank(record.reason)) out.emplace_back("override reason must be nonempty");
    if (record.actor_id.empty()) out.emplace_back("override actor must be set");
    return out;
}

std::vector<std::string> validate_entity(const Prescription& rx) {
    using S = PrescriptionStatus;
    std::vector<std::string> out;
    if (rx.patient_id.empty()) out.emplace_back("patient_id must be set");
    if (rx.prescriber_id.empty()) out.emplace_back("prescriber_id must be set");
    if (rx.diagnosis.empty()) out.emplace_back("diagnosis must be set");

    if (rx.items.empty()) {
        out.emplace_back("items must be nonempty");
    }
    std::set<Id> seen;
    bool duplicate = false;
    for (const auto& item : rx.items) {
        auto item_errors = validate_entity(item);
        out.insert(out.end(), item_errors.begin(), item_errors.end());
        if (!seen.insert(item.drug_id).second) duplicate = true;
    }
    if (duplicate) out.emplace_back("items must not repeat a drug");

    // Lifecycle timestamps, in order, must not decrease where present.
    std::optional<Timestamp> last = rx.created_at;
    for (const auto& ts : {rx.sent_at, rx.acknowledged_at, rx.dispensed_at}) {
        if (!ts) continue;
        if (*ts < *last) {
            out.emplace_back("lifecycle timestamps must be monotone");
            break;
        }
        last = ts;
    }
    if (rx.cancelled_at && *rx.cancelled_at < rx.created_at) {
        out.emplace_back("cancelled_at must not precede created_at");
    }

    const bool claimed = rx.status == S::acknowledged || rx.status == S::dispensed;
    if (claimed != rx.pharmacist_id.has_value()) {
        out.emplace_back("pharmacist_id must be present exactly when ACKNOWLEDGED or DISPENSED");
    }
    if (rx.status != S::draft && rx.status != S::cancelled && !rx.sent_at) {
        out.emplace_back("sent_at must be set once sent");
    }
    if (rx.status == S::cancelled && !rx.cancelled_at) {
        out.emplace_back("cancelled_at must be set when CANCELLED");
    }
    for (const auto& record : rx.overrides) {
        auto override_errors = validate_entity(record);
        out.insert(out.end(), override_errors.begin(), override_errors.end());
    }
    return out;
}

void require_valid(const std::vector<std::string>& violations) {
    if (violations.empty()) return;
    std::string message;
    for (const auto& v : violations) {
        if (!message.empty()) message += "; ";
        message += v;
    }
    throw Error(ErrorCode::validation, message);
}

}  // namespace rxtropic
