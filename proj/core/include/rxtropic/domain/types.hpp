/**
 * @file types.hpp
 * @brief Shared domain value types for the e-prescription service
 *
 * Every record kind handled by the service is a plain value type. Records are
 * never mutated in place by shared readers; changes go through the store.
 */

#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace rxtropic {

/// Millisecond-resolution UTC instant.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// Calendar date without time zone (date of birth).
using Date = std::chrono::year_month_day;

/// Opaque identifier: 128 random bits rendered as 32 lowercase hex digits.
using Id = std::string;

// =============================================================================
// Enumerations
// =============================================================================

enum class Role : std::uint8_t { administrator, doctor, pharmacist };

enum class Sex : std::uint8_t { male, female, other };

enum class InteractionSeverity : std::uint8_t { major, moderate, minor };

enum class PrescriptionStatus : std::uint8_t {
    draft,
    sent,
    acknowledged,
    dispensed,
    cancelled
};

enum class FindingKind : std::uint8_t { allergy, interaction, indication, duplicate };

enum class FindingSeverity : std::uint8_t { block, warn };

inline constexpr Role all_roles[] = {Role::administrator, Role::doctor, Role::pharmacist};

inline constexpr PrescriptionStatus all_statuses[] = {
    PrescriptionStatus::draft, PrescriptionStatus::sent,
    PrescriptionStatus::acknowledged, PrescriptionStatus::dispensed,
    PrescriptionStatus::cancelled};

inline constexpr FindingKind all_finding_kinds[] = {
    FindingKind::allergy, FindingKind::interaction, FindingKind::indication,
    FindingKind::duplicate};

// Wire names are upper-case ("ADMINISTRATOR", "SENT", ...); sex uses M/F/OTHER.
std::string_view to_string(Role role) noexcept;
std::string_view to_string(Sex sex) noexcept;
std::string_view to_string(InteractionSeverity severity) noexcept;
std::string_view to_string(PrescriptionStatus status) noexcept;
std::string_view to_string(FindingKind kind) noexcept;
std::string_view to_string(FindingSeverity severity) noexcept;

std::optional<Role> parse_role(std::string_view text) noexcept;
std::optional<Sex> parse_sex(std::string_view text) noexcept;
std::optional<InteractionSeverity> parse_interaction_severity(std::string_view text) noexcept;
std::optional<PrescriptionStatus> parse_status(std::string_view text) noexcept;
std::optional<FindingKind> parse_finding_kind(std::string_view text) noexcept;
std::optional<FindingSeverity> parse_finding_severity(std::string_view text) noexcept;

// =============================================================================
// Records
// =============================================================================

struct PractitionerAccount {
    Id id;
    std::string full_name;
    Role role = Role::doctor;
    std::string license_number;
    std::string password_digest;
    bool active = true;
    Timestamp created_at{};

    bool operator==(const PractitionerAccount&) const = default;
};

struct Patient {
    Id id;
    std::string full_name;
    Date date_of_birth{};
    Sex sex = Sex::other;
    std::set<std::string> allergies;  ///< normalized substance codes
    bool active = true;

    bool operator==(const Patient&) const = default;
};

struct Disease {
    Id id;
    std::string name;
    std::string description;

    bool operator==(const Disease&) const = default;
};

struct Drug {
    Id id;
    std::string name;
    std::string pharmaceutical_class;
    std::string generic_description;
    std::set<Id> indications;  ///< disease ids
    std::string adverse_reactions;
    std::string strength;
    std::set<std::string> substance_codes;  ///< admin-maintained, normalized
    bool active = true;

    bool operator==(const Drug&) const = default;
};

/**
 * @brief Unordered pair of drug ids.
 *
 * The constructor canonicalizes member order so that pair(a, b) == pair(b, a).
 * Equal members are representable so that validation can report them.
 */
class DrugPair {
public:
    DrugPair() = default;
    DrugPair(Id a, Id b);

    const Id& first() const noexcept { return first_; }
    const Id& second() const noexcept { return second_; }
    bool contains(std::string_view id) const noexcept;
    /// Storage key "<first>:<second>".
    std::string key() const;

    auto operator<=>(const DrugPair&) const = default;

private:
    Id first_;
    Id second_;
};

struct InteractionRule {
    DrugPair drug_pair;
    InteractionSeverity severity = InteractionSeverity::moderate;
    std::string note;

    bool operator==(const InteractionRule&) const = default;
};

struct PrescriptionItem {
    Id drug_id;
    std::string dose;
    std::string frequency;
    int duration_days = 1;
    std::string instructions;

    bool operator==(const PrescriptionItem&) const = default;
};

struct ValidationFinding {
    FindingKind kind = FindingKind::interaction;
    FindingSeverity severity = FindingSeverity::warn;
    std::string message;
    std::set<Id> subject_drug_ids;

    bool operator==(const ValidationFinding&) const = default;
};

struct OverrideRecord {
    FindingKind finding_kind = FindingKind::interaction;
    std::string reason;
    Id actor_id;
    Timestamp at{};

    bool operator==(const OverrideRecord&) const = default;
};

struct Prescription {
    Id id;
    Id patient_id;
    Id prescriber_id;
    Id diagnosis;
    std::vector<PrescriptionItem> items;
    PrescriptionStatus status = PrescriptionStatus::draft;
    std::vector<OverrideRecord> overrides;
    Timestamp created_at{};
    std::optional<Timestamp> sent_at;
    std::optional<Timestamp> acknowledged_at;
    std::optional<Timestamp> dispensed_at;
    std::optional<Timestamp> cancelled_at;
    std::optional<Id> pharmacist_id;

    bool operator==(const Prescription&) const = default;
};

/// Lower-cases ASCII letters and trims surrounding whitespace.
std::string normalize_code(std::string_view text);

/// Case-insensitive key used for the unique-name constraints.
std::string name_key(std::string_view text);

}  // namespace rxtropic
