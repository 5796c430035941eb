#include "world.hpp"

#include "rxtropic/domain/error.hpp"

#include <sstream>

namespace rxtropic::testing {

using namespace std::chrono;

Timestamp epoch() {
    return sys_days{year{2026} / 1 / 5} + hours{8};
}

World::World(bool seed_default, workflow::WorkflowConfig workflow) {
    api::ApplicationConfig config;
    config.store_dir = dir.path() / "store";
    config.store_options.full_sync = false;
    config.hash_cost = auth::HashCost::minimal;
    config.workflow = workflow;
    app = std::make_unique<api::Application>(config, clock);

    const auto admin_id =
        admin::bootstrap_admin(store(), app->hasher(), clock, "ADM-1", test_password, "Ada Admin");
    admin = {admin_id, Role::administrator};
    licenses_[admin_id] = "ADM-1";

    if (seed_default) {
        std::istringstream in{std::string(admin::default_fixture_text())};
        admin::seed(store(), clock, admin::parse_fixture(in));
    }
    doctor = add_practitioner(Role::doctor, "DOC-1", "Dana Doctor");
    doctor2 = add_practitioner(Role::doctor, "DOC-2", "Dele Doctor");
    pharmacist = add_practitioner(Role::pharmacist, "PHA-1", "Pat Pharmacist");
    pharmacist2 = add_practitioner(Role::pharmacist, "PHA-2", "Pim Pharmacist");
    refresh_names();
}

void World::refresh_names() {
    auto snap = store().snapshot();
    for (const auto& d : snap.list_diseases()) diseases_[d.name] = d.id;
    for (const auto& d : snap.list_drugs()) drugs_[d.name] = d.id;
    for (const auto& p : snap.list_patients()) patients_[p.full_name] = p.id;
}

std::string World::license_of(const auth::Actor& actor) const {
    return licenses_.at(actor.account_id);
}

std::string World::login(const auth::Actor& actor) {
    return sessions().login(license_of(actor), test_password).token;
}

auth::Actor World::add_practitioner(Role role, const std::string& license, const std::string& name) {
    const auto account = registry().create_practitioner(admin, {name, role, license, test_password});
    licenses_[account.id] = license;
    return {account.id, role};
}

Patient World::add_patient(const std::string& name, std::set<std::string> allergies) {
    Patient p;
    p.full_name = name;
    p.date_of_birth = year{1980} / 1 / 1;
    p.sex = Sex::other;
    p.allergies = std::move(allergies);
    auto created = registry().create_patient(admin, p);
    patients_[created.full_name] = created.id;
    return created;
}

PrescriptionItem World::item(const std::string& drug_name, int days) const {
    return {drug(drug_name), "1 tablet", "twice daily", days, "after food"};
}

Prescription World::make_in_status(PrescriptionStatus status, const Id& patient_id,
                                   std::vector<PrescriptionItem> items, const Id& diagnosis) {
    using S = PrescriptionStatus;
    auto rx_record = rx().compose(doctor, patient_id, diagnosis, std::move(items));
    if (status == S::draft) return rx_record;
    if (status == S::cancelled) return rx().cancel(doctor, rx_record.id, "test");
    rx_record = rx().send(doctor, rx_record.id, override_all());
    if (status == S::sent) return rx_record;
    rx_record = rx().acknowledge(pharmacist, rx_record.id);
    if (status == S::acknowledged) return rx_record;
    return rx().dispense(pharmacist, rx_record.id);
}

std::vector<workflow::OverrideRequest> overrides_for(const std::vector<ValidationFinding>& findings) {
    std::vector<workflow::OverrideRequest> out;
    std::set<FindingKind> seen;
    for (const auto& f : findings) {
        if (f.severity == FindingSeverity::warn && seen.insert(f.kind).second) {
            out.push_back({f.kind, "reviewed " + std::string(to_string(f.kind))});
        }
    }
    return out;
}

std::vector<workflow::OverrideRequest> override_all() {
    return {{FindingKind::interaction, "clinically required"},
            {FindingKind::indication, "off-label use reviewed"},
            {FindingKind::duplicate, "continuation intended"}};
}

}  // namespace rxtropic::testing
