/**
 * @file registry.hpp
 * @brief Reference-data maintenance and read-only lookups
 *
 * Accounts, patients and drugs are soft-deleted (active = false). Diseases
 * and interaction rules have no active flag and are removed outright;
 * a disease still cited as an indication cannot be removed.
 * Every successful change appends one audit entry.
 */

#pragma once

#include "rxtropic/auth/authenticator.hpp"
#include "rxtropic/auth/password.hpp"
#include "rxtropic/auth/permissions.hpp"
#include "rxtropic/domain/time.hpp"
#include "rxtropic/store/store.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rxtropic::admin {

using auth::Actor;

struct NewPractitioner {
    std::string full_name;
    Role role = Role::doctor;
    std::string license_number;
    std::string password;
};

/// Fields left unset keep their current value.
struct PractitionerUpdate {
    std::optional<std::string> full_name;
    std::optional<Role> role;
    std::optional<std::string> license_number;
    std::optional<std::string> password;
    std::optional<bool> active;
};

struct PatientRecord {
    Patient patient;
    std::vector<Prescription> prescriptions;  ///< newest first
};

class RegistryService {
public:
    /// `sessions` may be null (offline tooling); when set, deactivating or
    /// re-keying an account revokes its sessions.
    RegistryService(store::Store& store, const Clock& clock, const auth::PasswordHasher& hasher,
                    auth::Authenticator* sessions = nullptr);

    PractitionerAccount create_practitioner(const Actor& actor, const NewPractitioner& spec);
    PractitionerAccount update_practitioner(const Actor& actor, const Id& id,
                                            const PractitionerUpdate& update);
    PractitionerAccount deactivate_practitioner(const Actor& actor, const Id& id);
    PractitionerAccount get_practitioner(const Actor& actor, const Id& id);
    std::vector<PractitionerAccount> list_practitioners(const Actor& actor,
                                                        const store::AccountFilter& filter = {});

    Patient create_patient(const Actor& actor, Patient patient);
    Patient update_patient(const Actor& actor, Patient patient);
    Patient deactivate_patient(const Actor& actor, const Id& id);
    Patient get_patient(const Actor& actor, const Id& id);
    std::vector<Patient> list_patients(const Actor& actor, const store::PatientFilter& filter = {});

    Drug create_drug(const Actor& actor, Drug drug);
    Drug update_drug(const Actor& actor, Drug drug);
    Drug deactivate_drug(const Actor& actor, const Id& id);
    Drug get_drug(const Actor& actor, const Id& id);
    std::vector<Drug> list_drugs(const Actor& actor, const store::DrugFilter& filter = {});

    Disease create_disease(const Actor& actor, Disease disease);
    Disease update_disease(const Actor& actor, Disease disease);
    void remove_disease(const Actor& actor, const Id& id);
    Disease get_disease(const Actor& actor, const Id& id);
    std::vector<Disease> list_diseases(const Actor& actor);

    InteractionRule create_rule(const Actor& actor, const InteractionRule& rule);
    InteractionRule update_rule(const Actor& actor, const InteractionRule& rule);
    void remove_rule(const Actor& actor, const DrugPair& pair);
    InteractionRule get_rule(const Actor& actor, const DrugPair& pair);
    std::vector<InteractionRule> list_rules(const Actor& actor);

    // Clinical lookups for doctors and pharmacists.
    std::vector<Patient> search_patients(const Actor& actor, const std::string& query);
    PatientRecord patient_record(const Actor& actor, const Id& patient_id);
    Drug drug_detail(const Actor& actor, const Id& drug_id);
    std::vector<Drug> search_drugs(const Actor& actor, const std::string& query);
    std::vector<Disease> browse_diseases(const Actor& actor);
    std::vector<Drug> suggested_drugs(const Actor& actor, const Id& disease_id);

    /// Administrator-only audit trail, optionally for one entity.
    std::vector<store::AuditEntry> audit(const Actor& actor,
                                         const std::optional<std::string>& entity_id);

private:
    void check_drug_references(const store::Reader& reader, const Drug& drug) const;
    void check_rule_references(const store::Reader& reader, const InteractionRule& rule) const;

    store::Store& store_;
    const Clock& clock_;
    const auth::PasswordHasher& hasher_;
    auth::Authenticator* sessions_;
};

}  // namespace rxtropic::admin
