#include "rxtropic/auth/permissions.hpp"

#include "rxtropic/domain/error.hpp"

#include <array>
#include <string>
#include <utility>

namespace rxtropic::auth {

namespace {

constexpr std::array<std::pair<Permission, std::string_view>, 14> permission_names{{
    {Permission::manage_users, "MANAGE_USERS"},
    {Permission::manage_drugs, "MANAGE_DRUGS"},
    {Permission::manage_diseases, "MANAGE_DISEASES"},
    {Permission::manage_patients, "MANAGE_PATIENTS"},
    {Permission::manage_interactions, "MANAGE_INTERACTIONS"},
    {Permission::view_patient_record, "VIEW_PATIENT_RECORD"},
    {Permission::view_drug_detail, "VIEW_DRUG_DETAIL"},
    {Permission::compose_rx, "COMPOSE_RX"},
    {Permission::send_rx, "SEND_RX"},
    {Permission::cancel_rx, "CANCEL_RX"},
    {Permission::list_pending, "LIST_PENDING"},
    {Permission::acknowledge_rx, "ACKNOWLEDGE_RX"},
    {Permission::dispense_rx, "DISPENSE_RX"},
    {Permission::print_rx, "PRINT_RX"},
}};

}  // namespace

std::string_view to_string(Permission permission) noexcept {
    for (const auto& [p, name] : permission_names) {
        if (p == permission) return name;
    }
    return "?";
}

std::optional<Permission> parse_permission(std::string_view text) noexcept {
    for (const auto& [p, name] : permission_names) {
        if (name == text) return p;
    }
    return std::nullopt;
}

bool permits(Role role, Permission permission) noexcept {
    using P = Permission;
    switch (role) {
        case Role::administrator:
            switch (permission) {
                case P::manage_users:
                case P::manage_drugs:
                case P::manage_diseases:
                case P::manage_patients:
                case P::manage_interactions:
                case P::view_patient_record:
                case P::view_drug_detail:
                    return true;
                default:
                    return false;
            }
        case Role::doctor:
            switch (permission) {
                case P::view_patient_record:
                case P::view_drug_detail:
                case P::compose_rx:
                case P::send_rx:
                case P::cancel_rx:
                case P::manage_drugs:  // physicians maintain the formulary
                    return true;
                default:
                    return false;
            }
        case Role::pharmacist:
            switch (permission) {
                case P::list_pending:
                case P::acknowledge_rx:
                case P::dispense_rx:
                case P::print_rx:
                case P::view_drug_detail:
                case P::view_patient_record:
                    return true;
                default:
                    return false;
            }
    }
    return false;
}

void require(const Actor& actor, Permission permission) {
    if (!permits(actor.role, permission)) {
        throw Error(ErrorCode::forbidden, std::string(rxtropic::to_string(actor.role)) +
                                              " may not " + std::string(to_string(permission)));
    }
}

}  // namespace rxtropic::auth
