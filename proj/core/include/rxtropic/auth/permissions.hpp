/**
 * @file permissions.hpp
 * @brief Role-permission matrix and the authenticated actor
 */

#pragma once

#include "rxtropic/domain/types.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace rxtropic::auth {

enum class Permission : std::uint8_t {
    manage_users,
    manage_drugs,
    manage_diseases,
    manage_patients,
    manage_interactions,
    view_patient_record,
    view_drug_detail,
    compose_rx,
    send_rx,
    cancel_rx,
    list_pending,
    acknowledge_rx,
    dispense_rx,
    print_rx,
};

inline constexpr Permission all_permissions[] = {
    Permission::manage_users,        Permission::manage_drugs,
    Permission::manage_diseases,     Permission::manage_patients,
    Permission::manage_interactions, Permission::view_patient_record,
    Permission::view_drug_detail,    Permission::compose_rx,
    Permission::send_rx,             Permission::cancel_rx,
    Permission::list_pending,        Permission::acknowledge_rx,
    Permission::dispense_rx,         Permission::print_rx,
};

std::string_view to_string(Permission permission) noexcept;
std::optional<Permission> parse_permission(std::string_view text) noexcept;

/// The fixed matrix. Total over Role x Permission.
bool permits(Role role, Permission permission) noexcept;

/// Identity established by a live session.
struct Actor {
    Id account_id;
    Role role = Role::doctor;

    bool operator==(const Actor&) const = default;
};

/// Throws Error(FORBIDDEN) unless the actor's role holds the permission.
void require(const Actor& actor, Permission permission);

}  // namespace rxtropic::auth
