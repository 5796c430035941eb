/**
 * @file prescriptions.cpp
 * @brief Prescription lifecycle operations
 */

#include "rxtropic/workflow/prescriptions.hpp"

#include "rxtropic/domain/error.hpp"
#include "rxtropic/domain/ids.hpp"
#include "rxtropic/domain/json.hpp"
#include "rxtropic/domain/validation.hpp"
#include "rxtropic/workflow/print.hpp"

#include <algorithm>
#include <map>

namespace rxtropic::workflow {

using auth::Permission;
using nlohmann::json;
using S = PrescriptionStatus;

namespace {

[[noreturn]] void wrong_state(const Prescription& rx, std::string_view operation) {
    throw Error(ErrorCode::wrong_state, "cannot " + std::string(operation) + " a " +
                                            std::string(to_string(rx.status)) + " prescription");
}

void require_prescriber(const Actor& actor, const Prescription& rx) {
    if (rx.prescriber_id != actor.account_id) {
        throw Error(ErrorCode::not_prescriber, "only the prescribing doctor may change " + rx.id);
    }
}

/// Lifecycle stamps never run backwards even if the wall clock does.
Timestamp not_before(Timestamp now, std::optional<Timestamp> floor) {
    return floor && *floor > now ? *floor : now;
}

void require_references(const store::Reader& reader, const Id& diagnosis,
                        const std::vector<PrescriptionItem>& items) {
    if (!reader.find_disease(diagnosis)) {
        throw Error(ErrorCode::unknown_disease, "disease " + diagnosis + " is not registered");
    }
    for (const auto& item : items) {
        auto drug = reader.find_drug(item.drug_id);
        if (!drug || !drug->active) {
            throw Error(ErrorCode::unknown_drug,
                        "drug " + item.drug_id + " is not an active formulary entry");
        }
    }
}

/// Maps a lost compare-and-set race onto the caller-facing state error.
template <typename Fn>
Prescription as_wrong_state_on_conflict(Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::conflict) {
            throw Error(ErrorCode::wrong_state, e.what());
        }
        throw;
    }
}

json overrides_detail(const std::vector<OverrideRecord>& records) {
    json kinds = json::array();
    for (const auto& r : records) kinds.push_back(to_string(r.finding_kind));
    return kinds;
}

}  // namespace

rules::Formulary load_formulary(const store::Reader& reader) {
    return rules::Formulary(reader.list_drugs(), reader.list_diseases(), reader.list_rules());
}

std::vector<ValidationFinding> screen(const store::Reader& reader, const Prescription& prescription,
                                      Timestamp now, int window_days) {
    const auto patient = reader.find_patient(prescription.patient_id);
    if (!patient) {
        throw Error(ErrorCode::unknown_patient, "patient " + prescription.patient_id + " not found");
    }
    auto history = reader.list_prescriptions({.patient_id = prescription.patient_id});
    std::erase_if(history, [&](const Prescription& rx) { return rx.id == prescription.id; });
    const auto context = rules::build_context(*patient, history, now, window_days);
    return rules::validate(prescription, context, load_formulary(reader), now, window_days);
}

PrescriptionService::PrescriptionService(store::Store& store, const Clock& clock,
                                         WorkflowConfig config)
    : store_(store), clock_(clock), config_(config) {}

Prescription PrescriptionService::compose(const Actor& doctor, const Id& patient_id,
                                          const Id& diagnosis, std::vector<PrescriptionItem> items) {
    auth::require(doctor, Permission::compose_rx);
    const auto now = clock_.now();
    return store_.write([&](store::Transaction& txn) {
        const auto prescriber = txn.find_account(doctor.account_id);
        if (!prescriber || prescriber->role != Role::doctor || !prescriber->active) {
            throw Error(ErrorCode::forbidden, "prescriber must be an active doctor");
        }
        const auto patient = txn.find_patient(patient_id);
        if (!patient || !patient->active) {
            throw Error(ErrorCode::unknown_patient, "patient " + patient_id + " not found");
        }

        Prescription rx;
        rx.id = new_id();
        rx.patient_id = patient_id;
        rx.prescriber_id = doctor.account_id;
        rx.diagnosis = diagnosis;
        rx.items = std::move(items);
        rx.status = S::draft;
        rx.created_at = now;
        require_valid(validate_entity(rx));
        require_references(txn, diagnosis, rx.items);

        txn.put(rx);
        txn.append_audit({now, doctor.account_id, "prescription.compose", "prescription", rx.id,
                          json{{"patient_id", patient_id},
                               {"diagnosis", diagnosis},
                               {"item_count", rx.items.size()}}});
        return rx;
    });
}

std::vector<ValidationFinding> PrescriptionService::preview_findings(const Actor& doctor,
                                                                     const Id& prescription_id) {
    auth::require(doctor, Permission::compose_rx);
    const auto snapshot = store_.snapshot();
    const auto rx = snapshot.get_prescription(prescription_id);
    require_prescriber(doctor, rx);
    if (rx.status != S::draft) wrong_state(rx, "preview");
    return screen(snapshot, rx, clock_.now(), config_.duplicate_window_days);
}

Prescription PrescriptionService::edit_draft(const Actor& doctor, const Id& prescription_id,
                                             std::vector<PrescriptionItem> items,
                                             const Id& diagnosis) {
    auth::require(doctor, Permission::compose_rx);
    const auto now = clock_.now();
    return store_.write([&](store::Transaction& txn) {
        auto rx = txn.get_prescription(prescription_id);
        require_prescriber(doctor, rx);
        if (rx.status != S::draft) wrong_state(rx, "edit");

        rx.items = std::move(items);
        rx.diagnosis = diagnosis;
        rx.overrides.clear();
        require_valid(validate_entity(rx));
        require_references(txn, diagnosis, rx.items);

        txn.put(rx);
        txn.append_audit({now, doctor.account_id, "prescription.edit", "prescription", rx.id,
                          json{{"diagnosis", diagnosis}, {"item_count", rx.items.size()}}});
        return rx;
    });
}

Prescription PrescriptionService::send(const Actor& doctor, const Id& prescription_id,
                                       const std::vector<OverrideRequest>& overrides) {
    auth::require(doctor, Permission::send_rx);
    {
        const auto current = store_.snapshot().get_prescription(prescription_id);
        require_prescriber(doctor, current);
        if (current.status != S::draft) wrong_state(current, "send");
    }

    const auto now = clock_.now();
    auto mutate = [&](Prescription& rx, const store::Reader& reader, json& detail) {
        require_prescriber(doctor, rx);
        require_references(reader, rx.diagnosis, rx.items);
        const auto findings = screen(reader, rx, now, config_.duplicate_window_days);
        if (rules::has_block(findings)) {
            throw Error(ErrorCode::blocked, "prescription has blocking findings", findings);
        }

        // Overrides are matched per finding kind, not per finding.
        std::vector<OverrideRecord> accepted;
        std::vector<ValidationFinding> unresolved;
        for (const auto kind : all_finding_kinds) {
            const bool present = std::any_of(findings.begin(), findings.end(),
                                             [&](const auto& f) { return f.kind == kind; });
            if (!present) continue;
            auto match = std::find_if(overrides.begin(), overrides.end(), [&](const auto& o) {
                return o.finding_kind == kind && !normalize_code(o.reason).empty();
            });
            if (match != overrides.end()) {
                accepted.push_back({kind, match->reason, doctor.account_id, now});
            } else {
                for (const auto& f : findings) {
                    if (f.kind == kind) unresolved.push_back(f);
                }
            }
        }
        if (!unresolved.empty()) {
            throw Error(ErrorCode::overrides_required,
                        "warnings must be overridden with a reason before sending", unresolved);
        }

        rx.overrides = std::move(accepted);
        rx.sent_at = not_before(now, rx.created_at);
        detail["finding_count"] = findings.size();
        detail["overrides"] = overrides_detail(rx.overrides);
    };

    return as_wrong_state_on_conflict([&] {
        return store_.transition(prescription_id, S::draft, S::sent, mutate,
                                 {now, doctor.account_id, "prescription.send", {}, {}, json::object()});
    });
}

Prescription PrescriptionService::cancel(const Actor& doctor, const Id& prescription_id,
                                         const std::string& reason) {
    auth::require(doctor, Permission::cancel_rx);
    const auto current = store_.snapshot().get_prescription(prescription_id);
    require_prescriber(doctor, current);
    if (current.status != S::draft && current.status != S::sent) wrong_state(current, "cancel");

    const auto now = clock_.now();
    auto mutate = [&](Prescription& rx, const store::Reader&, json&) {
        rx.cancelled_at = not_before(now, rx.sent_at ? rx.sent_at : rx.created_at);
    };
    return as_wrong_state_on_conflict([&] {
        return store_.transition(prescription_id, current.status, S::cancelled, mutate,
                                 {now, doctor.account_id, "prescription.cancel", {}, {},
                                  json{{"reason", reason}}});
    });
}

std::vector<PrescriptionSummary> PrescriptionService::list_pending(const Actor& pharmacist) {
    auth::require(pharmacist, Permission::list_pending);
    const auto snapshot = store_.snapshot();
    auto queue = snapshot.list_prescriptions({.status = S::sent});
    auto mine = snapshot.list_prescriptions(
        {.status = S::acknowledged, .pharmacist_id = pharmacist.account_id});
    queue.insert(queue.end(), mine.begin(), mine.end());
    std::sort(queue.begin(), queue.end(), [](const Prescription& a, const Prescription& b) {
        if (a.sent_at != b.sent_at) return a.sent_at < b.sent_at;
        return a.id < b.id;
    });

    std::vector<PrescriptionSummary> out;
    out.reserve(queue.size());
    for (const auto& rx : queue) {
        PrescriptionSummary s;
        s.id = rx.id;
        s.status = rx.status;
        s.patient_id = rx.patient_id;
        s.prescriber_id = rx.prescriber_id;
        s.item_count = rx.items.size();
        s.sent_at = rx.sent_at;
        s.pharmacist_id = rx.pharmacist_id;
        if (auto p = snapshot.find_patient(rx.patient_id)) s.patient_name = p->full_name;
        if (auto d = snapshot.find_account(rx.prescriber_id)) s.prescriber_name = d->full_name;
        if (auto dx = snapshot.find_disease(rx.diagnosis)) s.diagnosis_name = dx->name;
        out.push_back(std::move(s));
    }
    return out;
}

Prescription PrescriptionService::acknowledge(const Actor& pharmacist, const Id& prescription_id) {
    auth::require(pharmacist, Permission::acknowledge_rx);
    const auto current = store_.snapshot().get_prescription(prescription_id);
    if (current.status != S::sent) wrong_state(current, "acknowledge");

    const auto now = clock_.now();
    auto mutate = [&](Prescription& rx, const store::Reader&, json&) {
        rx.pharmacist_id = pharmacist.account_id;
        rx.acknowledged_at = not_before(now, rx.sent_at);
    };
    return as_wrong_state_on_conflict([&] {
        return store_.transition(prescription_id, S::sent, S::acknowledged, mutate,
                                 {now, pharmacist.account_id, "prescription.acknowledge", {}, {},
                                  json::object()});
    });
}

Prescription PrescriptionService::dispense(const Actor& pharmacist, const Id& prescription_id) {
    auth::require(pharmacist, Permission::dispense_rx);
    const auto current = store_.snapshot().get_prescription(prescription_id);
    if (current.status != S::acknowledged) wrong_state(current, "dispense");
    if (current.pharmacist_id != pharmacist.account_id) {
        throw Error(ErrorCode::not_acknowledging_pharmacist,
                    "only the acknowledging pharmacist may dispense " + prescription_id);
    }

    const auto now = clock_.now();
    auto mutate = [&](Prescription& rx, const store::Reader&, json&) {
        if (rx.pharmacist_id != pharmacist.account_id) {
            throw Error(ErrorCode::not_acknowledging_pharmacist,
                        "only the acknowledging pharmacist may dispense " + prescription_id);
        }
        rx.dispensed_at = not_before(now, rx.acknowledged_at);
    };
    return as_wrong_state_on_conflict([&] {
        return store_.transition(prescription_id, S::acknowledged, S::dispensed, mutate,
                                 {now, pharmacist.account_id, "prescription.dispense", {}, {},
                                  json::object()});
    });
}

std::string PrescriptionService::print_copy(const Actor& pharmacist, const Id& prescription_id) {
    auth::require(pharmacist, Permission::print_rx);
    const auto now = clock_.now();
    return store_.write([&](store::Transaction& txn) {
        const auto rx = txn.get_prescription(prescription_id);
        if (rx.status != S::sent && rx.status != S::acknowledged && rx.status != S::dispensed) {
            wrong_state(rx, "print");
        }
        const auto patient = txn.get_patient(rx.patient_id);
        const auto prescriber = txn.get_account(rx.prescriber_id);
        const auto disease = txn.get_disease(rx.diagnosis);
        std::map<Id, Drug> drugs;
        for (const auto& item : rx.items) drugs.emplace(item.drug_id, txn.get_drug(item.drug_id));

        auto text = render_print({rx, patient, prescriber, disease, drugs}, now);
        txn.append_audit({now, pharmacist.account_id, "prescription.print", "prescription", rx.id,
                          json{{"status", to_string(rx.status)}}});
        return text;
    });
}

Prescription PrescriptionService::get(const Actor& actor, const Id& prescription_id) {
    auth::require(actor, Permission::view_patient_record);
    return store_.snapshot().get_prescription(prescription_id);
}

}  // namespace rxtropic::workflow
