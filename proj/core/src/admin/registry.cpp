#include "rxtropic/admin/registry.hpp"

#include "rxtropic/domain/error.hpp"
#include "rxtropic/domain/ids.hpp"
#include "rxtropic/domain/validation.hpp"
#include "rxtropic/rules/engine.hpp"

#include <algorithm>

namespace rxtropic::admin {

using auth::Permission;
using nlohmann::json;

namespace {

[[noreturn]] void duplicate(std::string_view what, std::string_view value) {
    throw Error(ErrorCode::unique_violation,
                std::string(what) + " '" + std::string(value) + "' is already registered");
}

}  // namespace

RegistryService::RegistryService(store::Store& store, const Clock& clock,
                                 const auth::PasswordHasher& hasher, auth::Authenticator* sessions)
    : store_(store), clock_(clock), hasher_(hasher), sessions_(sessions) {}

// =============================================================================
// Practitioners
// =============================================================================

PractitionerAccount RegistryService::create_practitioner(const Actor& actor,
                                                         const NewPractitioner& spec) {
    auth::require(actor, Permission::manage_users);
    auth::require_strong(spec.password);
    PractitionerAccount account;
    account.id = new_id();
    account.full_name = spec.full_name;
    account.role = spec.role;
    account.license_number = spec.license_number;
    account.password_digest = hasher_.digest(spec.password);
    account.active = true;
    account.created_at = clock_.now();
    require_valid(validate_entity(account));

    return store_.write([&](store::Transaction& txn) {
        if (txn.find_account_by_license(account.license_number)) {
            duplicate("license number", account.license_number);
        }
        txn.put(account);
        txn.append_audit({account.created_at, actor.account_id, "account.create", "account",
                          account.id,
                          json{{"role", to_string(account.role)},
                               {"license_number", account.license_number}}});
        return account;
    });
}

PractitionerAccount RegistryService::update_practitioner(const Actor& actor, const Id& id,
                                                         const PractitionerUpdate& update) {
    auth::require(actor, Permission::manage_users);
    std::optional<std::string> digest;
    if (update.password) {
        auth::require_strong(*update.password);
        digest = hasher_.digest(*update.password);
    }
    const auto now = clock_.now();
    auto updated = store_.write([&](store::Transaction& txn) {
        auto account = txn.get_account(id);
        json fields = json::array();
        if (update.full_name) {
            account.full_name = *update.full_name;
            fields.push_back("full_name");
        }
        if (update.role) {
            account.role = *update.role;
            fields.push_back("role");
        }
        if (update.license_number) {
            auto clash = txn.find_account_by_license(*update.license_number);
            if (clash && clash->id != id) duplicate("license number", *update.license_number);
            account.license_number = *update.license_number;
            fields.push_back("license_number");
        }
        if (digest) {
            account.password_digest = *digest;
            fields.push_back("password");
        }
        if (update.active) {
            account.active = *update.active;
            fields.push_back("active");
        }
        require_valid(validate_entity(account));
        txn.put(account);
        txn.append_audit({now, actor.account_id, "account.update", "account", id,
                          json{{"fields", fields}}});
        return account;
    });
    if (sessions_ && (update.role || update.password || update.license_number ||
                      (update.active && !*update.active))) {
        sessions_->revoke_account(id);
    }
    return updated;
}

PractitionerAccount RegistryService::deactivate_practitioner(const Actor& actor, const Id& id) {
    auth::require(actor, Permission::manage_users);
    const auto now = clock_.now();
    auto account = store_.write([&](store::Transaction& txn) {
        auto current = txn.get_account(id);
        current.active = false;
        txn.put(current);
        txn.append_audit({now, actor.account_id, "account.deactivate", "account", id,
                          json::object()});
        return current;
    });
    if (sessions_) sessions_->revoke_account(id);
    return account;
}

PractitionerAccount RegistryService::get_practitioner(const Actor& actor, const Id& id) {
    auth::require(actor, Permission::manage_users);
    return store_.snapshot().get_account(id);
}

std::vector<PractitionerAccount> RegistryService::list_practitioners(
    const Actor& actor, const store::AccountFilter& filter) {
    auth::require(actor, Permission::manage_users);
    return store_.snapshot().list_accounts(filter);
}

// =============================================================================
// Patients
// =============================================================================

Patient RegistryService::create_patient(const Actor& actor, Patient patient) {
    auth::require(actor, Permission::manage_patients);
    const auto now = clock_.now();
    patient.id = new_id();
    require_valid(validate_entity(patient, to_date(now)));
    return store_.write([&](store::Transaction& txn) {
        txn.put(patient);
        txn.append_audit({now, actor.account_id, "patient.create", "patient", patient.id,
                          json::object()});
        return patient;
    });
}

Patient RegistryService::update_patient(const Actor& actor, Patient patient) {
    auth::require(actor, Permission::manage_patients);
    const auto now = clock_.now();
    require_valid(validate_entity(patient, to_date(now)));
    return store_.write([&](store::Transaction& txn) {
        txn.get_patient(patient.id);
        txn.put(patient);
        txn.append_audit({now, actor.account_id, "patient.update", "patient", patient.id,
                          json{{"allergies", patient.allergies}, {"active", patient.active}}});
        return patient;
    });
}

Patient RegistryService::deactivate_patient(const Actor& actor, const Id& id) {
    auth::require(actor, Permission::manage_patients);
    const auto now = clock_.now();
    return store_.write([&](store::Transaction& txn) {
        auto patient = txn.get_patient(id);
        patient.active = false;
        txn.put(patient);
        txn.append_audit({now, actor.account_id, "patient.deactivate", "patient", id,
                          json::object()});
        return patient;
    });
}

Patient RegistryService::get_patient(const Actor& actor, const Id& id) {
    auth::require(actor, Permission::manage_patients);
    return store_.snapshot().get_patient(id);
}

std::vector<Patient> RegistryService::list_patients(const Actor& actor,
                                                    const store::PatientFilter& filter) {
    auth::require(actor, Permission::manage_patients);
    return store_.snapshot().list_patients(filter);
}

// =============================================================================
// Drugs
// =============================================================================

void RegistryService::check_drug_references(const store::Reader& reader, const Drug& drug) const {
    for (const auto& disease_id : drug.indications) {
        if (!reader.find_disease(disease_id)) {
            throw Error(ErrorCode::unknown_disease,
                        "indication " + disease_id + " is not a registered disease");
        }
    }
    auto clash = reader.find_drug_by_name(drug.name);
    if (clash && clash->id != drug.id) duplicate("drug name", drug.name);
}

Drug RegistryService::create_drug(const Actor& actor, Drug drug) {
    auth::require(actor, Permission::manage_drugs);
    drug.id = new_id();
    require_valid(validate_entity(drug));
    const auto now = clock_.now();
    return store_.write([&](store::Transaction& txn) {
        check_drug_references(txn, drug);
        txn.put(drug);
        txn.append_audit({now, actor.account_id, "drug.create", "drug", drug.id,
                          json{{"name", drug.name}}});
        return drug;
    });
}

Drug RegistryService::update_drug(const Actor& actor, Drug drug) {
    auth::require(actor, Permission::manage_drugs);
    require_valid(validate_entity(drug));
    const auto now = clock_.now();
    return store_.write([&](store::Transaction& txn) {
        txn.get_drug(drug.id);
        check_drug_references(txn, drug);
        txn.put(drug);
        txn.append_audit({now, actor.account_id, "drug.update", "drug", drug.id,
                          json{{"name", drug.name}, {"active", drug.active}}});
        return drug;
    });
}

Drug RegistryService::deactivate_drug(const Actor& actor, const Id& id) {
    auth::require(actor, Permission::manage_drugs);
    const auto now = clock_.now();
    return store_.write([&](store::Transaction& txn) {
        auto drug = txn.get_drug(id);
        drug.active = false;
        txn.put(drug);
        txn.append_audit({now, actor.account_id, "drug.deactivate", "drug", id, json::object()});
        return drug;
    });
}

Drug RegistryService::get_drug(const Actor& actor, const Id& id) {
    auth::require(actor, Permission::manage_drugs);
    return store_.snapshot().get_drug(id);
}

std::vector<Drug> RegistryService::list_drugs(const Actor& actor, const store::DrugFilter& filter) {
    auth::require(actor, Permission::manage_drugs);
    return store_.snapshot().list_drugs(filter);
}

// =============================================================================
// Diseases
// =============================================================================

Disease RegistryService::create_disease(const Actor& actor, Disease disease) {
    auth::require(actor, Permission::manage_diseases);
    disease.id = new_id();
    require_valid(validate_entity(disease));
    const auto now = clock_.now();
    return store_.write([&](store::Transaction& txn) {
        if (txn.find_disease_by_name(disease.name)) duplicate("disease name", disease.name);
        txn.put(disease);
        txn.append_audit({now, actor.account_id, "disease.create", "disease", disease.id,
                          json{{"name", disease.name}}});
        return disease;
    });
}

Disease RegistryService::update_disease(const Actor& actor, Disease disease) {
    auth::require(actor, Permission::manage_diseases);
    require_valid(validate_entity(disease));
    const auto now = clock_.now();
    return store_.write([&](store::Transaction& txn) {
        txn.get_disease(disease.id);
        auto clash = txn.find_disease_by_name(disease.name);
        if (clash && clash->id != disease.id) duplicate("disease name", disease.name);
        txn.put(disease);
        txn.append_audit({now, actor.account_id, "disease.update", "disease", disease.id,
                          json{{"name", disease.name}}});
        return disease;
    });
}

void RegistryService::remove_disease(const Actor& actor, const Id& id) {
    auth::require(actor, Permission::manage_diseases);
    const auto now = clock_.now();
    store_.write([&](store::Transaction& txn) {
        txn.get_disease(id);
        for (const auto& drug : txn.list_drugs()) {
            if (drug.indications.contains(id)) {
                throw Error(ErrorCode::conflict,
                            "disease is an indication of drug '" + drug.name + "'");
            }
        }
        for (const auto& rx : txn.list_prescriptions()) {
            if (rx.diagnosis == id) {
                throw Error(ErrorCode::conflict, "disease is the diagnosis of prescription " + rx.id);
            }
        }
        txn.remove_disease(id);
        txn.append_audit({now, actor.account_id, "disease.remove", "disease", id, json::object()});
    });
}

Disease RegistryService::get_disease(const Actor& actor, const Id& id) {
    auth::require(actor, Permission::manage_diseases);
    return store_.snapshot().get_disease(id);
}

std::vector<Disease> RegistryService::list_diseases(const Actor& actor) {
    auth::require(actor, Permission::manage_diseases);
    return store_.snapshot().list_diseases();
}

// =============================================================================
// Interaction rules
// =============================================================================

void RegistryService::check_rule_references(const store::Reader& reader,
                                            const InteractionRule& rule) const {
    for (const auto& id : {rule.drug_pair.first(), rule.drug_pair.second()}) {
        if (!reader.find_drug(id)) {
            throw Error(ErrorCode::unknown_drug, "drug " + id + " is not in the formulary");
        }
    }
}

InteractionRule RegistryService::create_rule(const Actor& actor, const InteractionRule& rule) {
    auth::require(actor, Permission::manage_interactions);
    require_valid(validate_entity(rule));
    const auto now = clock_.now();
    return store_.write([&](store::Transaction& txn) {
        check_rule_references(txn, rule);
        if (txn.find_rule(rule.drug_pair)) duplicate("interaction rule", rule.drug_pair.key());
        txn.put(rule);
        txn.append_audit({now, actor.account_id, "interaction.create", "interaction",
                          rule.drug_pair.key(), json{{"severity", to_string(rule.severity)}}});
        return rule;
    });
}

InteractionRule RegistryService::update_rule(const Actor& actor, const InteractionRule& rule) {
    auth::require(actor, Permission::manage_interactions);
    require_valid(validate_entity(rule));
    const auto now = clock_.now();
    return store_.write([&](store::Transaction& txn) {
        if (!txn.find_rule(rule.drug_pair)) {
            throw Error(ErrorCode::not_found,
                        "interaction rule " + rule.drug_pair.key() + " not found");
        }
        txn.put(rule);
        txn.append_audit({now, actor.account_id, "interaction.update", "interaction",
                          rule.drug_pair.key(), json{{"severity", to_string(rule.severity)}}});
        return rule;
    });
}

void RegistryService::remove_rule(const Actor& actor, const DrugPair& pair) {
    auth::require(actor, Permission::manage_interactions);
    const auto now = clock_.now();
    store_.write([&](store::Transaction& txn) {
        txn.remove_rule(pair);
        txn.append_audit({now, actor.account_id, "interaction.remove", "interaction", pair.key(),
                          json::object()});
    });
}

InteractionRule RegistryService::get_rule(const Actor& actor, const DrugPair& pair) {
    auth::require(actor, Permission::manage_interactions);
    auto rule = store_.snapshot().find_rule(pair);
    if (!rule) throw Error(ErrorCode::not_found, "interaction rule " + pair.key() + " not found");
    return *rule;
}

std::vector<InteractionRule> RegistryService::list_rules(const Actor& actor) {
    auth::require(actor, Permission::manage_interactions);
    return store_.snapshot().list_rules();
}

// =============================================================================
// Clinical lookups
// =============================================================================

std::vector<Patient> RegistryService::search_patients(const Actor& actor, const std::string& query) {
    auth::require(actor, Permission::view_patient_record);
    return store_.snapshot().list_patients({.name_contains = query, .active = true});
}

PatientRecord RegistryService::patient_record(const Actor& actor, const Id& patient_id) {
    auth::require(actor, Permission::view_patient_record);
    const auto snapshot = store_.snapshot();
    PatientRecord record{snapshot.get_patient(patient_id),
                         snapshot.list_prescriptions({.patient_id = patient_id})};
    std::sort(record.prescriptions.begin(), record.prescriptions.end(),
              [](const Prescription& a, const Prescription& b) {
                  if (a.created_at != b.created_at) return a.created_at > b.created_at;
                  return a.id < b.id;
              });
    return record;
}

Drug RegistryService::drug_detail(const Actor& actor, const Id& drug_id) {
    auth::require(actor, Permission::view_drug_detail);
    return store_.snapshot().get_drug(drug_id);
}

std::vector<Drug> RegistryService::search_drugs(const Actor& actor, const std::string& query) {
    auth::require(actor, Permission::view_drug_detail);
    return store_.snapshot().list_drugs({.name_contains = query, .active = true});
}

std::vector<Disease> RegistryService::browse_diseases(const Actor& actor) {
    auth::require(actor, Permission::view_drug_detail);
    return store_.snapshot().list_diseases();
}

std::vector<Drug> RegistryService::suggested_drugs(const Actor& actor, const Id& disease_id) {
    auth::require(actor, Permission::view_drug_detail);
    const auto snapshot = store_.snapshot();
    const rules::Formulary formulary(snapshot.list_drugs(), snapshot.list_diseases(), {});
    return rules::suggest_drugs(disease_id, formulary);
}

std::vector<store::AuditEntry> RegistryService::audit(const Actor& actor,
                                                      const std::optional<std::string>& entity_id) {
    if (actor.role != Role::administrator) {
        throw Error(ErrorCode::forbidden, "the audit trail is available to administrators only");
    }
    return store_.snapshot().audit_scan(entity_id);
}

}  // namespace rxtropic::admin
