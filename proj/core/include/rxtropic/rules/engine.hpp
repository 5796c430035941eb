/**
 * @file engine.hpp
 * @brief Prescription screening: allergy, interaction, indication, duplicate therapy
 *
 * All checks are pure functions over immutable inputs and are safe to call
 * concurrently. Only allergy findings are BLOCK; the other three kinds are
 * WARN and can be overridden by the prescriber with a recorded reason.
 *
 * Output order is deterministic. Within a check, findings follow the order of
 * the prescription items; validate() concatenates the checks in the order
 * ALLERGY, INTERACTION, INDICATION, DUPLICATE.
 */

#pragma once

#include "rxtropic/domain/types.hpp"

#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace rxtropic::rules {

inline constexpr int default_duplicate_window_days = 30;

/// Read-only lookup of drugs, diseases and interaction rules.
class Formulary {
public:
    Formulary() = default;
    Formulary(std::vector<Drug> drugs, std::vector<Disease> diseases,
              std::vector<InteractionRule> rules);

    const Drug* find_drug(const Id& id) const;
    const Disease* find_disease(const Id& id) const;
    const InteractionRule* find_rule(const Id& a, const Id& b) const;

    const std::vector<Drug>& drugs() const noexcept { return drugs_; }

private:
    std::vector<Drug> drugs_;
    std::unordered_map<Id, std::size_t> drug_index_;
    std::unordered_map<Id, Disease> diseases_;
    std::map<DrugPair, InteractionRule> rules_;
};

struct RecentPrescription {
    Id drug_id;
    Timestamp sent_at{};

    bool operator==(const RecentPrescription&) const = default;
};

/// Derived at evaluation time from a patient record and prescription history.
struct PatientClinicalContext {
    std::set<std::string> allergies;
    std::set<Id> active_medications;
    std::vector<RecentPrescription> recent_prescriptions;
};

/**
 * @brief Builds the clinical context for one patient.
 *
 * Active medications: every drug on a SENT or ACKNOWLEDGED prescription, plus
 * drugs on DISPENSED prescriptions whose dispensed_at + duration_days still
 * covers `now`. Recent prescriptions: (drug, sent_at) for every non-cancelled
 * prescription sent within `window_days` before `now`.
 */
PatientClinicalContext build_context(const Patient& patient, std::span<const Prescription> history,
                                     Timestamp now,
                                     int window_days = default_duplicate_window_days);

/// Substance codes a drug carries: its normalized name plus its explicit codes.
std::set<std::string> substance_codes_of(const Drug& drug);

/// One ALLERGY/BLOCK finding per item whose substance codes meet the allergies.
/// Throws Error(UNKNOWN_DRUG) for items absent from the formulary.
std::vector<ValidationFinding> check_allergy(std::span<const PrescriptionItem> items,
                                             const std::set<std::string>& allergies,
                                             const Formulary& formulary);

/// One INTERACTION/WARN finding per ruled pair drawn from items and active
/// medications with at least one member among the items.
std::vector<ValidationFinding> check_interactions(std::span<const PrescriptionItem> items,
                                                  const std::set<Id>& active_medications,
                                                  const Formulary& formulary);

/// One INDICATION/WARN finding per item whose drug is not indicated for the
/// diagnosis. Throws Error(UNKNOWN_DISEASE) / Error(UNKNOWN_DRUG).
std::vector<ValidationFinding> check_indication(std::span<const PrescriptionItem> items,
                                                const Id& diagnosis, const Formulary& formulary);

/// One DUPLICATE/WARN finding per item whose drug was sent within the window.
std::vector<ValidationFinding> check_duplicate(std::span<const PrescriptionItem> items,
                                               std::span<const RecentPrescription> recent,
                                               Timestamp now,
                                               int window_days = default_duplicate_window_days);

std::vector<ValidationFinding> validate(const Prescription& prescription,
                                        const PatientClinicalContext& context,
                                        const Formulary& formulary, Timestamp now,
                                        int window_days = default_duplicate_window_days);

/// Active drugs indicated for the diagnosis, sorted by name (case-insensitive).
std::vector<Drug> suggest_drugs(const Id& diagnosis, const Formulary& formulary);

bool has_block(std::span<const ValidationFinding> findings);

}  // namespace rxtropic::rules
