/**
 * @file prescriptions.hpp
 * @brief Prescription lifecycle: compose, screen, send, acknowledge, dispense
 *
 * Lifecycle:
 *
 *     DRAFT --send--> SENT --acknowledge--> ACKNOWLEDGED --dispense--> DISPENSED
 *       |               |
 *       +---cancel------+-----> CANCELLED
 *
 * Only the prescribing doctor may edit, send or cancel, and only before a
 * pharmacist has acknowledged. Every status change is an atomic
 * compare-and-set in the store, so concurrent acknowledgements of the same
 * prescription produce exactly one winner. Every successful mutation and
 * every print appends exactly one audit entry.
 */

#pragma once

#include "rxtropic/auth/permissions.hpp"
#include "rxtropic/domain/time.hpp"
#include "rxtropic/rules/engine.hpp"
#include "rxtropic/store/store.hpp"

#include <string>
#include <vector>

namespace rxtropic::workflow {

using auth::Actor;

struct OverrideRequest {
    FindingKind finding_kind = FindingKind::interaction;
    std::string reason;
};

struct PrescriptionSummary {
    Id id;
    PrescriptionStatus status = PrescriptionStatus::sent;
    Id patient_id;
    std::string patient_name;
    Id prescriber_id;
    std::string prescriber_name;
    std::string diagnosis_name;
    std::size_t item_count = 0;
    std::optional<Timestamp> sent_at;
    std::optional<Id> pharmacist_id;
};

struct WorkflowConfig {
    int duplicate_window_days = rules::default_duplicate_window_days;
};

/// Loads drugs, diseases and interaction rules visible to `reader`.
rules::Formulary load_formulary(const store::Reader& reader);

/// Screens `prescription` against the patient's current record.
std::vector<ValidationFinding> screen(const store::Reader& reader, const Prescription& prescription,
                                      Timestamp now, int window_days);

class PrescriptionService {
public:
    PrescriptionService(store::Store& store, const Clock& clock, WorkflowConfig config = {});

    Prescription compose(const Actor& doctor, const Id& patient_id, const Id& diagnosis,
                         std::vector<PrescriptionItem> items);

    std::vector<ValidationFinding> preview_findings(const Actor& doctor, const Id& prescription_id);

    /// Replaces items and diagnosis; clears overrides.
    Prescription edit_draft(const Actor& doctor, const Id& prescription_id,
                            std::vector<PrescriptionItem> items, const Id& diagnosis);

    /// BLOCKED on any allergy finding; OVERRIDES_REQUIRED unless every WARN
    /// kind present has an override with a nonempty reason.
    Prescription send(const Actor& doctor, const Id& prescription_id,
                      const std::vector<OverrideRequest>& overrides);

    Prescription cancel(const Actor& doctor, const Id& prescription_id, const std::string& reason);

    /// SENT prescriptions plus those this pharmacist acknowledged, oldest sent first.
    std::vector<PrescriptionSummary> list_pending(const Actor& pharmacist);

    Prescription acknowledge(const Actor& pharmacist, const Id& prescription_id);

    Prescription dispense(const Actor& pharmacist, const Id& prescription_id);

    /// Printed copy; audited as a disclosure.
    std::string print_copy(const Actor& pharmacist, const Id& prescription_id);

    Prescription get(const Actor& actor, const Id& prescription_id);

private:
    store::Store& store_;
    const Clock& clock_;
    WorkflowConfig config_;
};

}  // namespace rxtropic::workflow
