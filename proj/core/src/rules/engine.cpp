/**
 * @file engine.cpp
 * @brief Prescription screening checks
 */

#include "rxtropic/rules/engine.hpp"

#include "rxtropic/domain/error.hpp"
#include "rxtropic/domain/time.hpp"

#include <algorithm>

namespace rxtropic::rules {

namespace {

using std::chrono::days;

const Drug& require_drug(const Formulary& formulary, const Id& id) {
    const auto* drug = formulary.find_drug(id);
    if (!drug) {
        throw Error(ErrorCode::unknown_drug, "drug " + id + " is not in the formulary");
    }
    return *drug;
}

std::string drug_label(const Formulary& formulary, const Id& id) {
    const auto* drug = formulary.find_drug(id);
    return drug ? drug->name : id;
}

std::string join(const std::set<std::string>& values) {
    std::string out;
    for (const auto& v : values) {
        if (!out.empty()) out += ", ";
        out += v;
    }
    return out;
}

bool within_window(Timestamp sent_at, Timestamp now, int window_days) {
    return sent_at <= now && now - sent_at <= days{window_days};
}

}  // namespace

Formulary::Formulary(std::vector<Drug> drugs, std::vector<Disease> diseases,
                     std::vector<InteractionRule> rules)
    : drugs_(std::move(drugs)) {
    for (std::size_t i = 0; i < drugs_.size(); ++i) drug_index_.emplace(drugs_[i].id, i);
    for (auto& disease : diseases) diseases_.emplace(disease.id, std::move(disease));
    for (auto& rule : rules) rules_.emplace(rule.drug_pair, std::move(rule));
}

const Drug* Formulary::find_drug(const Id& id) const {
    auto it = drug_index_.find(id);
    return it == drug_index_.end() ? nullptr : &drugs_[it->second];
}

const Disease* Formulary::find_disease(const Id& id) const {
    auto it = diseases_.find(id);
    return it == diseases_.end() ? nullptr : &it->second;
}

const InteractionRule* Formulary::find_rule(const Id& a, const Id& b) const {
    if (a == b) return nullptr;
    auto it = rules_.find(DrugPair(a, b));
    return it == rules_.end() ? nullptr : &it->second;
}

PatientClinicalContext build_context(const Patient& patient, std::span<const Prescription> history,
                                     Timestamp now, int window_days) {
    using S = PrescriptionStatus;
    PatientClinicalContext ctx;
    ctx.allergies = patient.allergies;
    for (const auto& rx : history) {
        if (rx.patient_id != patient.id) continue;
        for (const auto& item : rx.items) {
            if (rx.status == S::sent || rx.status == S::acknowledged) {
                ctx.active_medications.insert(item.drug_id);
            } else if (rx.status == S::dispensed && rx.dispensed_at &&
                       now <= *rx.dispensed_at + days{item.duration_days}) {
                ctx.active_medications.insert(item.drug_id);
            }
        }
        if (rx.status != S::cancelled && rx.sent_at && within_window(*rx.sent_at, now, window_days)) {
            for (const auto& item : rx.items) {
                ctx.recent_prescriptions.push_back({item.drug_id, *rx.sent_at});
            }
        }
    }
    return ctx;
}

std::set<std::string> substance_codes_of(const Drug& drug) {
    std::set<std::string> codes = drug.substance_codes;
    codes.insert(normalize_code(drug.name));
    return codes;
}

std::vector<ValidationFinding> check_allergy(std::span<const PrescriptionItem> items,
                                             const std::set<std::string>& allergies,
                                             const Formulary& formulary) {
    std::vector<ValidationFinding> out;
    for (const auto& item : items) {
        const auto& drug = require_drug(formulary, item.drug_id);
        std::set<std::string> hits;
        for (const auto& code : substance_codes_of(drug)) {
            if (allergies.contains(code)) hits.insert(code);
        }
        if (hits.empty()) continue;
        out.push_back({FindingKind::allergy, FindingSeverity::block,
                       drug.name + " contains " + join(hits) + ", to which the patient is allergic",
                       {drug.id}});
    }
    return out;
}

std::vector<ValidationFinding> check_interactions(std::span<const PrescriptionItem> items,
                                                  const std::set<Id>& active_medications,
                                                  const Formulary& formulary) {
    std::vector<Id> prescribed;
    for (const auto& item : items) {
        if (std::find(prescribed.begin(), prescribed.end(), item.drug_id) == prescribed.end()) {
            prescribed.push_back(item.drug_id);
        }
    }
    std::vector<Id> already_taking;
    for (const auto& id : active_medications) {
        if (std::find(prescribed.begin(), prescribed.end(), id) == prescribed.end()) {
            already_taking.push_back(id);
        }
    }

    std::vector<ValidationFinding> out;
    auto report = [&](const Id& a, const Id& b) {
        const auto* rule = formulary.find_rule(a, b);
        if (!rule) return;
        std::string message = std::string(to_string(rule->severity)) + " interaction between " +
                              drug_label(formulary, a) + " and " + drug_label(formulary, b);
        if (!rule->note.empty()) message += ": " + rule->note;
        out.push_back({FindingKind::interaction, FindingSeverity::warn, std::move(message), {a, b}});
    };
    for (std::size_t i = 0; i < prescribed.size(); ++i) {
        for (std::size_t j = i + 1; j < prescribed.size(); ++j) report(prescribed[i], prescribed[j]);
        for (const auto& other : already_taking) report(prescribed[i], other);
    }
    return out;
}

std::vector<ValidationFinding> check_indication(std::span<const PrescriptionItem> items,
                                                const Id& diagnosis, const Formulary& formulary) {
    const auto* disease = formulary.find_disease(diagnosis);
    if (!disease) {
        throw Error(ErrorCode::unknown_disease, "disease " + diagnosis + " is not registered");
    }
    std::vector<ValidationFinding> out;
    for (const auto& item : items) {
        const auto& drug = require_drug(formulary, item.drug_id);
        if (drug.indications.contains(diagnosis)) continue;
        std::string message = drug.indications.empty()
                                  ? drug.name + " has no recorded indications"
                                  : drug.name + " is not indicated for " + disease->name;
        out.push_back({FindingKind::indication, FindingSeverity::warn, std::move(message), {drug.id}});
    }
    return out;
}

std::vector<ValidationFinding> check_duplicate(std::span<const PrescriptionItem> items,
                                               std::span<const RecentPrescription> recent,
                                               Timestamp now, int window_days) {
    std::vector<ValidationFinding> out;
    for (const auto& item : items) {
        std::optional<Timestamp> latest;
        for (const auto& r : recent) {
            if (r.drug_id != item.drug_id || !within_window(r.sent_at, now, window_days)) continue;
            if (!latest || r.sent_at > *latest) latest = r.sent_at;
        }
        if (!latest) continue;
        out.push_back({FindingKind::duplicate, FindingSeverity::warn,
                       "drug " + item.drug_id + " was already prescribed on " +
                           format_date(to_date(*latest)) + " (within " +
                           std::to_string(window_days) + " days)",
                       {item.drug_id}});
    }
    return out;
}

std::vector<ValidationFinding> validate(const Prescription& prescription,
                                        const PatientClinicalContext& context,
                                        const Formulary& formulary, Timestamp now,
                                        int window_days) {
    std::vector<ValidationFinding> out = check_allergy(prescription.items, context.allergies, formulary);
    auto append = [&out](std::vector<ValidationFinding> more) {
        out.insert(out.end(), std::make_move_iterator(more.begin()),
                   std::make_move_iterator(more.end()));
    };
    append(check_interactions(prescription.items, context.active_medications, formulary));
    append(check_indication(prescription.items, prescription.diagnosis, formulary));
    append(check_duplicate(prescription.items, context.recent_prescriptions, now, window_days));
    return out;
}

std::vector<Drug> suggest_drugs(const Id& diagnosis, const Formulary& formulary) {
    if (!formulary.find_disease(diagnosis)) {
        throw Error(ErrorCode::unknown_disease, "disease " + diagnosis + " is not registered");
    }
    std::vector<Drug> out;
    for (const auto& drug : formulary.drugs()) {
        if (drug.active && drug.indications.contains(diagnosis)) out.push_back(drug);
    }
    std::sort(out.begin(), out.end(), [](const Drug& a, const Drug& b) {
        const auto ka = name_key(a.name);
        const auto kb = name_key(b.name);
        return ka != kb ? ka < kb : a.id < b.id;
    });
    return out;
}

bool has_block(std::span<const ValidationFinding> findings) {
    return std::any_of(findings.begin(), findings.end(), [](const ValidationFinding& f) {
        return f.severity == FindingSeverity::block;
    });
}

}  // namespace rxtropic::rules
