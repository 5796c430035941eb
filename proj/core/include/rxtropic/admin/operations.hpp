/**
 * @file operations.hpp
 * @brief Operator tasks behind the admin command-line tool
 */

#pragma once

#include "rxtropic/admin/fixture.hpp"
#include "rxtropic/auth/password.hpp"
#include "rxtropic/domain/time.hpp"
#include "rxtropic/store/store.hpp"

#include <nlohmann/json.hpp>

#include <ostream>

namespace rxtropic::admin {

/// Creates the first administrator. ALREADY_BOOTSTRAPPED once any
/// administrator exists; WEAK_PASSWORD below the minimum length.
Id bootstrap_admin(store::Store& store, const auth::PasswordHasher& hasher, const Clock& clock,
                   std::string_view license_number, std::string_view password,
                   std::string_view full_name = "Administrator");

struct KindCounts {
    std::size_t created = 0;
    std::size_t updated = 0;
    std::size_t unchanged = 0;
    bool operator==(const KindCounts&) const = default;
};

struct SeedReport {
    KindCounts diseases;
    KindCounts drugs;
    KindCounts rules;
    KindCounts patients;

    std::size_t created() const;
    std::size_t updated() const;
    nlohmann::json to_json() const;
};

/**
 * @brief Upserts a fixture by natural key in one transaction.
 *
 * Natural keys: disease and drug names, the unordered drug-name pair of a
 * rule, and (name, date of birth) for patients. Re-seeding the same fixture
 * changes nothing. REFERENCE_ERROR when a drug cites an unknown disease or a
 * rule cites an unknown drug; nothing is written in that case.
 */
SeedReport seed(store::Store& store, const Clock& clock, const Fixture& fixture);

/// One JSON object per line, in seq order. Returns the number of lines.
std::size_t export_audit(const store::Store& store, std::ostream& out);

/// All stored reference data, sorted by name; references use display names.
Fixture export_fixture(const store::Store& store);

}  // namespace rxtropic::admin
