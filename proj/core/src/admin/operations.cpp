#include "rxtropic/admin/operations.hpp"

#include "rxtropic/domain/error.hpp"
#include "rxtropic/domain/ids.hpp"
#include "rxtropic/domain/validation.hpp"

#include <algorithm>
#include <map>

namespace rxtropic::admin {

using nlohmann::json;

Id bootstrap_admin(store::Store& store, const auth::PasswordHasher& hasher, const Clock& clock,
                   std::string_view license_number, std::string_view password,
                   std::string_view full_name) {
    auth::require_strong(password);
    PractitionerAccount account;
    account.id = new_id();
    account.full_name = std::string(full_name);
    account.role = Role::administrator;
    account.license_number = std::string(license_number);
    account.password_digest = hasher.digest(password);
    account.active = true;
    account.created_at = clock.now();
    require_valid(validate_entity(account));

    store.write([&](store::Transaction& txn) {
        if (!txn.list_accounts({Role::administrator, std::nullopt}).empty()) {
            throw Error(ErrorCode::already_bootstrapped, "an administrator account already exists");
        }
        if (txn.find_account_by_license(account.license_number)) {
            throw Error(ErrorCode::unique_violation,
                        "license number '" + account.license_number + "' is already registered");
        }
        txn.put(account);
        txn.append_audit({account.created_at, std::string(store::system_actor), "account.bootstrap",
                          "account", account.id,
                          json{{"license_number", account.license_number}}});
    });
    return account.id;
}

std::size_t SeedReport::created() const {
    return diseases.created + drugs.created + rules.created + patients.created;
}

std::size_t SeedReport::updated() const {
    return diseases.updated + drugs.updated + rules.updated + patients.updated;
}

namespace {

json counts_json(const KindCounts& c) {
    return {{"created", c.created}, {"updated", c.updated}, {"unchanged", c.unchanged}};
}

template <typename Record>
void upsert(store::Transaction& txn, const Clock& clock, KindCounts& counts,
            const std::optional<Record>& existing, Record record, std::string_view kind,
            const std::string& entity_id) {
    if (existing && *existing == record) {
        ++counts.unchanged;
        return;
    }
    txn.put(record);
    const bool created = !existing;
    ++(created ? counts.created : counts.updated);
    txn.append_audit({clock.now(), std::string(store::system_actor),
                      std::string(kind) + (created ? ".create" : ".update"), std::string(kind),
                      entity_id, json{{"source", "seed"}}});
}

}  // namespace

json SeedReport::to_json() const {
    return {{"diseases", counts_json(diseases)},
            {"drugs", counts_json(drugs)},
            {"interactions", counts_json(rules)},
            {"patients", counts_json(patients)}};
}

SeedReport seed(store::Store& store, const Clock& clock, const Fixture& fixture) {
    const auto today = to_date(clock.now());
    return store.write([&](store::Transaction& txn) {
        SeedReport report;

        for (const auto& d : fixture.diseases) {
            auto existing = txn.find_disease_by_name(d.name);
            Disease disease{existing ? existing->id : new_id(), d.name, d.description};
            require_valid(validate_entity(disease));
            upsert(txn, clock, report.diseases, existing, disease, "disease", disease.id);
        }

        for (const auto& d : fixture.drugs) {
            auto existing = txn.find_drug_by_name(d.name);
            Drug drug;
            drug.id = existing ? existing->id : new_id();
            drug.name = d.name;
            drug.pharmaceutical_class = d.pharmaceutical_class;
            drug.generic_description = d.generic_description;
            drug.adverse_reactions = d.adverse_reactions;
            drug.strength = d.strength;
            drug.active = existing ? existing->active : true;
            for (const auto& name : d.indications) {
                auto disease = txn.find_disease_by_name(name);
                if (!disease) {
                    throw Error(ErrorCode::reference_error,
                                "drug '" + d.name + "' cites unknown disease '" + name + "'");
                }
                drug.indications.insert(disease->id);
            }
            for (const auto& code : d.substance_codes) drug.substance_codes.insert(normalize_code(code));
            require_valid(validate_entity(drug));
            upsert(txn, clock, report.drugs, existing, drug, "drug", drug.id);
        }

        for (const auto& r : fixture.rules) {
            auto a = txn.find_drug_by_name(r.drug_a);
            auto b = txn.find_drug_by_name(r.drug_b);
            if (!a || !b) {
                throw Error(ErrorCode::reference_error,
                            "interaction cites unknown drug '" + (a ? r.drug_b : r.drug_a) + "'");
            }
            InteractionRule rule{DrugPair(a->id, b->id), r.severity, r.note};
            require_valid(validate_entity(rule));
            upsert(txn, clock, report.rules, txn.find_rule(rule.drug_pair), rule, "interaction",
                   rule.drug_pair.key());
        }

        for (const auto& p : fixture.patients) {
            std::optional<Patient> existing;
            for (auto& candidate : txn.list_patients({p.full_name, std::nullopt})) {
                if (name_key(candidate.full_name) == name_key(p.full_name) &&
                    candidate.date_of_birth == p.date_of_birth) {
                    existing = std::move(candidate);
                    break;
                }
            }
            Patient patient;
            patient.id = existing ? existing->id : new_id();
            patient.full_name = p.full_name;
            patient.date_of_birth = p.date_of_birth;
            patient.sex = p.sex;
            for (const auto& code : p.allergies) patient.allergies.insert(normalize_code(code));
            patient.active = existing ? existing->active : true;
            require_valid(validate_entity(patient, today));
            upsert(txn, clock, report.patients, existing, patient, "patient", patient.id);
        }
        return report;
    });
}

std::size_t export_audit(const store::Store& store, std::ostream& out) {
    const auto entries = store.audit_scan();
    for (const auto& entry : entries) out << store::to_json(entry).dump() << '\n';
    return entries.size();
}

Fixture export_fixture(const store::Store& store) {
    const auto snap = store.snapshot();
    Fixture fixture;
    std::map<Id, std::string> disease_names;
    std::map<Id, std::string> drug_names;

    for (const auto& d : snap.list_diseases()) {
        disease_names[d.id] = d.name;
        fixture.diseases.push_back({d.name, d.description});
    }
    for (const auto& d : snap.list_drugs()) {
        drug_names[d.id] = d.name;
        FixtureDrug drug{d.name, d.pharmaceutical_class, d.generic_description, {},
                         d.adverse_reactions, d.strength, {d.substance_codes.begin(), d.substance_codes.end()}};
        for (const auto& id : d.indications) drug.indications.push_back(disease_names.at(id));
        std::sort(drug.indications.begin(), drug.indications.end(),
                  [](const auto& a, const auto& b) { return name_key(a) < name_key(b); });
        fixture.drugs.push_back(std::move(drug));
    }
    for (const auto& r : snap.list_rules()) {
        FixtureRule rule{drug_names.at(r.drug_pair.first()), drug_names.at(r.drug_pair.second()),
                         r.severity, r.note};
        if (name_key(rule.drug_b) < name_key(rule.drug_a)) std::swap(rule.drug_a, rule.drug_b);
        fixture.rules.push_back(std::move(rule));
    }
    std::sort(fixture.rules.begin(), fixture.rules.end(), [](const auto& a, const auto& b) {
        return std::pair(name_key(a.drug_a), name_key(a.drug_b)) <
               std::pair(name_key(b.drug_a), name_key(b.drug_b));
    });
    for (const auto& p : snap.list_patients()) {
        fixture.patients.push_back({p.full_name, p.date_of_birth, p.sex,
                                    {p.allergies.begin(), p.allergies.end()}});
    }
    return fixture;
}

}  // namespace rxtropic::admin
