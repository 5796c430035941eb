/**
 * @file types.cpp
 * @brief Enum wire names, DrugPair, and the Error exception
 */

#include "rxtropic/domain/error.hpp"
#include "rxtropic/domain/types.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

namespace rxtropic {

namespace {

template <typename Enum, std::size_t N>
using NameTable = std::array<std::pair<Enum, std::string_view>, N>;

constexpr NameTable<Role, 3> role_names{{
    {Role::administrator, "ADMINISTRATOR"},
    {Role::doctor, "DOCTOR"},
    {Role::pharmacist, "PHARMACIST"},
}};

constexpr NameTable<Sex, 3> sex_names{{
    {Sex::male, "M"},
    {Sex::female, "F"},
    {Sex::other, "OTHER"},
}};

constexpr NameTable<InteractionSeverity, 3> interaction_severity_names{{
    {InteractionSeverity::major, "MAJOR"},
    {InteractionSeverity::moderate, "MODERATE"},
    {InteractionSeverity::minor, "MINOR"},
}};

constexpr NameTable<PrescriptionStatus, 5> status_names{{
    {PrescriptionStatus::draft, "DRAFT"},
    {PrescriptionStatus::sent, "SENT"},
    {PrescriptionStatus::acknowledged, "ACKNOWLEDGED"},
    {PrescriptionStatus::dispensed, "DISPENSED"},
    {PrescriptionStatus::cancelled, "CANCELLED"},
}};

constexpr NameTable<FindingKind, 4> finding_kind_names{{
    {FindingKind::allergy, "ALLERGY"},
    {FindingKind::interaction, "INTERACTION"},
    {FindingKind::indication, "INDICATION"},
    {FindingKind::duplicate, "DUPLICATE"},
}};

constexpr NameTable<FindingSeverity, 2> finding_severity_names{{
    {FindingSeverity::block, "BLOCK"},
    {FindingSeverity::warn, "WARN"},
}};

constexpr NameTable<ErrorCode, 21> error_code_names{{
    {ErrorCode::invalid_credentials, "INVALID_CREDENTIALS"},
    {ErrorCode::unauthenticated, "UNAUTHENTICATED"},
    {ErrorCode::forbidden, "FORBIDDEN"},
    {ErrorCode::weak_password, "WEAK_PASSWORD"},
    {ErrorCode::not_found, "NOT_FOUND"},
    {ErrorCode::unknown_patient, "UNKNOWN_PATIENT"},
    {ErrorCode::unknown_drug, "UNKNOWN_DRUG"},
    {ErrorCode::unknown_disease, "UNKNOWN_DISEASE"},
    {ErrorCode::unique_violation, "UNIQUE_VIOLATION"},
    {ErrorCode::conflict, "CONFLICT"},
    {ErrorCode::wrong_state, "WRONG_STATE"},
    {ErrorCode::validation, "VALIDATION"},
    {ErrorCode::blocked, "BLOCKED"},
    {ErrorCode::overrides_required, "OVERRIDES_REQUIRED"},
    {ErrorCode::not_prescriber, "NOT_PRESCRIBER"},
    {ErrorCode::not_acknowledging_pharmacist, "NOT_ACKNOWLEDGING_PHARMACIST"},
    {ErrorCode::already_bootstrapped, "ALREADY_BOOTSTRAPPED"},
    {ErrorCode::parse_error, "PARSE_ERROR"},
    {ErrorCode::reference_error, "REFERENCE_ERROR"},
    {ErrorCode::store_unavailable, "STORE_UNAVAILABLE"},
    {ErrorCode::internal, "INTERNAL"},
}};

template <typename Enum, std::size_t N>
std::string_view name_of(const NameTable<Enum, N>& table, Enum value) noexcept {
    for (const auto& [e, name] : table) {
        if (e == value) {
            return name;
        }
    }
    return "?";
}

template <typename Enum, std::size_t N>
std::optional<Enum> value_of(const NameTable<Enum, N>& table, std::string_view text) noexcept {
    for (const auto& [e, name] : table) {
        if (name == text) {
            return e;
        }
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(Role role) noexcept { return name_of(role_names, role); }
std::string_view to_string(Sex sex) noexcept { return name_of(sex_names, sex); }
std::string_view to_string(InteractionSeverity severity) noexcept {
    return name_of(interaction_severity_names, severity);
}
std::string_view to_string(PrescriptionStatus status) noexcept {
    return name_of(status_names, status);
}
std::string_view to_string(FindingKind kind) noexcept { return name_of(finding_kind_names, kind); }
std::string_view to_string(FindingSeverity severity) noexcept {
    return name_of(finding_severity_names, severity);
}
std::string_view to_string(ErrorCode code) noexcept { return name_of(error_code_names, code); }

std::optional<Role> parse_role(std::string_view text) noexcept {
    return value_of(role_names, text);
}
std::optional<Sex> parse_sex(std::string_view text) noexcept { return value_of(sex_names, text); }
std::optional<InteractionSeverity> parse_interaction_severity(std::string_view text) noexcept {
    return value_of(interaction_severity_names, text);
}
std::optional<PrescriptionStatus> parse_status(std::string_view text) noexcept {
    return value_of(status_names, text);
}
std::optional<FindingKind> parse_finding_kind(std::string_view text) noexcept {
    return value_of(finding_kind_names, text);
}
std::optional<FindingSeverity> parse_finding_severity(std::string_view text) noexcept {
    return value_of(finding_severity_names, text);
}

DrugPair::DrugPair(Id a, Id b) : first_(std::move(a)), second_(std::move(b)) {
    if (second_ < first_) {
        std::swap(first_, second_);
    }
}

bool DrugPair::contains(std::string_view id) const noexcept {
    return first_ == id || second_ == id;
}

std::string DrugPair::key() const { return first_ + ":" + second_; }

std::string normalize_code(std::string_view text) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    auto begin = std::find_if_not(text.begin(), text.end(), is_space);
    auto end = std::find_if_not(text.rbegin(), std::make_reverse_iterator(begin), is_space).base();
    std::string out(begin, end);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string name_key(std::string_view text) { return normalize_code(text); }

Error::Error(ErrorCode code, const std::string& message, std::vector<ValidationFinding> findings)
    : std::runtime_error(message), code_(code), findings_(std::move(findings)) {}

}  // namespace rxtropic
