/**
 * @file json.cpp
 * @brief JSON mapping for domain records
 */

#include "rxtropic/domain/json.hpp"

#include "rxtropic/domain/time.hpp"

namespace rxtropic {

using nlohmann::json;

namespace {

[[noreturn]] void bad_field(std::string_view field, std::string_view expected) {
    throw Error(ErrorCode::validation,
                "field '" + std::string(field) + "' must be " + std::string(expected));
}

const json& field(const json& j, std::string_view name) {
    if (!j.is_object()) {
        throw Error(ErrorCode::validation, "expected a JSON object");
    }
    auto it = j.find(name);
    if (it == j.end()) {
        bad_field(name, "present");
    }
    return *it;
}

const json* optional_field(const json& j, std::string_view name) {
    if (!j.is_object()) {
        throw Error(ErrorCode::validation, "expected a JSON object");
    }
    auto it = j.find(name);
    if (it == j.end() || it->is_null()) {
        return nullptr;
    }
    return &*it;
}

std::string get_string(const json& j, std::string_view name) {
    const auto& v = field(j, name);
    if (!v.is_string()) bad_field(name, "a string");
    return v.get<std::string>();
}

std::string get_string_or(const json& j, std::string_view name, std::string fallback = {}) {
    const auto* v = optional_field(j, name);
    if (!v) return fallback;
    if (!v->is_string()) bad_field(name, "a string");
    return v->get<std::string>();
}

bool get_bool_or(const json& j, std::string_view name, bool fallback) {
    const auto* v = optional_field(j, name);
    if (!v) return fallback;
    if (!v->is_boolean()) bad_field(name, "a boolean");
    return v->get<bool>();
}

Timestamp get_timestamp(const json& j, std::string_view name) {
    auto ts = parse_timestamp(get_string(j, name));
    if (!ts) bad_field(name, "an ISO-8601 UTC timestamp");
    return *ts;
}

std::optional<Timestamp> get_optional_timestamp(const json& j, std::string_view name) {
    const auto* v = optional_field(j, name);
    if (!v) return std::nullopt;
    if (!v->is_string()) bad_field(name, "an ISO-8601 UTC timestamp");
    auto ts = parse_timestamp(v->get<std::string>());
    if (!ts) bad_field(name, "an ISO-8601 UTC timestamp");
    return ts;
}

/// String array into a set. Duplicates are rejected so set invariants are
/// never satisfied silently by the container.
std::set<std::string> get_string_set(const json& j, std::string_view name, bool normalize) {
    std::set<std::string> out;
    const auto* v = optional_field(j, name);
    if (!v) return out;
    if (!v->is_array()) bad_field(name, "an array of strings");
    for (const auto& e : *v) {
        if (!e.is_string()) bad_field(name, "an array of strings");
        auto s = e.get<std::string>();
        if (normalize) s = normalize_code(s);
        if (!out.insert(std::move(s)).second) {
            throw Error(ErrorCode::validation,
                        "field '" + std::string(name) + "' must not contain duplicates");
        }
    }
    return out;
}

template <typename Enum>
Enum get_enum(const json& j, std::string_view name,
              std::optional<Enum> (*parse)(std::string_view) noexcept) {
    auto value = parse(get_string(j, name));
    if (!value) bad_field(name, "a known enumeration value");
    return *value;
}

json optional_timestamp(const std::optional<Timestamp>& ts) {
    return ts ? json(format_timestamp(*ts)) : json(nullptr);
}

}  // namespace

void to_json(json& j, const PractitionerAccount& v) {
    j = json{{"id", v.id},
             {"full_name", v.full_name},
             {"role", to_string(v.role)},
             {"license_number", v.license_number},
             {"password_digest", v.password_digest},
             {"active", v.active},
             {"created_at", format_timestamp(v.created_at)}};
}

void from_json(const json& j, PractitionerAccount& v) {
    v.id = get_string_or(j, "id");
    v.full_name = get_string(j, "full_name");
    v.role = get_enum(j, "role", &parse_role);
    v.license_number = get_string(j, "license_number");
    v.password_digest = get_string_or(j, "password_digest");
    v.active = get_bool_or(j, "active", true);
    v.created_at = optional_field(j, "created_at") ? get_timestamp(j, "created_at") : Timestamp{};
}

nlohmann::json public_view(const PractitionerAccount& account) {
    json j = account;
    j.erase("password_digest");
    return j;
}

void to_json(json& j, const Patient& v) {
    j = json{{"id", v.id},
             {"full_name", v.full_name},
             {"date_of_birth", format_date(v.date_of_birth)},
             {"sex", to_string(v.sex)},
             {"allergies", v.allergies},
             {"active", v.active}};
}

void from_json(const json& j, Patient& v) {
    v.id = get_string_or(j, "id");
    v.full_name = get_string(j, "full_name");
    auto dob = parse_date(get_string(j, "date_of_birth"));
    if (!dob) bad_field("date_of_birth", "a YYYY-MM-DD date");
    v.date_of_birth = *dob;
    v.sex = get_enum(j, "sex", &parse_sex);
    v.allergies = get_string_set(j, "allergies", true);
    v.active = get_bool_or(j, "active", true);
}

void to_json(json& j, const Disease& v) {
    j = json{{"id", v.id}, {"name", v.name}, {"description", v.description}};
}

void from_json(const json& j, Disease& v) {
    v.id = get_string_or(j, "id");
    v.name = get_string(j, "name");
    v.description = get_string_or(j, "description");
}

void to_json(json& j, const Drug& v) {
    j = json{{"id", v.id},
             {"name", v.name},
             {"pharmaceutical_class", v.pharmaceutical_class},
             {"generic_description", v.generic_description},
             {"indications", v.indications},
             {"adverse_reactions", v.adverse_reactions},
             {"strength", v.strength},
             {"substance_codes", v.substance_codes},
             {"active", v.active}};
}

void from_json(const json& j, Drug& v) {
    v.id = get_string_or(j, "id");
    v.name = get_string(j, "name");
    v.pharmaceutical_class = get_string_or(j, "pharmaceutical_class");
    v.generic_description = get_string_or(j, "generic_description");
    v.indications = get_string_set(j, "indications", false);
    v.adverse_reactions = get_string_or(j, "adverse_reactions");
    v.strength = get_string_or(j, "strength");
    v.substance_codes = get_string_set(j, "substance_codes", true);
    v.active = get_bool_or(j, "active", true);
}

void to_json(json& j, const InteractionRule& v) {
    j = json{{"drug_a", v.drug_pair.first()},
             {"drug_b", v.drug_pair.second()},
             {"severity", to_string(v.severity)},
             {"note", v.note}};
}

void from_json(const json& j, InteractionRule& v) {
    v.drug_pair = DrugPair(get_string(j, "drug_a"), get_string(j, "drug_b"));
    v.severity = get_enum(j, "severity", &parse_interaction_severity);
    v.note = get_string_or(j, "note");
}

void to_json(json& j, const PrescriptionItem& v) {
    j = json{{"drug_id", v.drug_id},
             {"dose", v.dose},
             {"frequency", v.frequency},
             {"duration_days", v.duration_days},
             {"instructions", v.instructions}};
}

void from_json(const json& j, PrescriptionItem& v) {
    v.drug_id = get_string(j, "drug_id");
    v.dose = get_string_or(j, "dose");
    v.frequency = get_string_or(j, "frequency");
    const auto& days = field(j, "duration_days");
    if (!days.is_number_integer()) bad_field("duration_days", "an integer");
    const auto n = days.get<std::int64_t>();
    if (n < 1 || n > 3650) bad_field("duration_days", "between 1 and 3650");
    v.duration_days = static_cast<int>(n);
    v.instructions = get_string_or(j, "instructions");
}

void to_json(json& j, const ValidationFinding& v) {
    j = json{{"kind", to_string(v.kind)},
             {"severity", to_string(v.severity)},
             {"message", v.message},
             {"subject_drug_ids", v.subject_drug_ids}};
}

void from_json(const json& j, ValidationFinding& v) {
    v.kind = get_enum(j, "kind", &parse_finding_kind);
    v.severity = get_enum(j, "severity", &parse_finding_severity);
    v.message = get_string_or(j, "message");
    v.subject_drug_ids = get_string_set(j, "subject_drug_ids", false);
}

void to_json(json& j, const OverrideRecord& v) {
    j = json{{"finding_kind", to_string(v.finding_kind)},
             {"reason", v.reason},
             {"actor_id", v.actor_id},
             {"at", format_timestamp(v.at)}};
}

void from_json(const json& j, OverrideRecord& v) {
    v.finding_kind = get_enum(j, "finding_kind", &parse_finding_kind);
    v.reason = get_string(j, "reason");
    v.actor_id = get_string_or(j, "actor_id");
    v.at = optional_field(j, "at") ? get_timestamp(j, "at") : Timestamp{};
}

void to_json(json& j, const Prescription& v) {
    j = json{{"id", v.id},
             {"patient_id", v.patient_id},
             {"prescriber_id", v.prescriber_id},
             {"diagnosis", v.diagnosis},
             {"items", v.items},
             {"status", to_string(v.status)},
             {"overrides", v.overrides},
             {"created_at", format_timestamp(v.created_at)},
             {"sent_at", optional_timestamp(v.sent_at)},
             {"acknowledged_at", optional_timestamp(v.acknowledged_at)},
             {"dispensed_at", optional_timestamp(v.dispensed_at)},
             {"cancelled_at", optional_timestamp(v.cancelled_at)},
             {"pharmacist_id", v.pharmacist_id ? json(*v.pharmacist_id) : json(nullptr)}};
}

void from_json(const json& j, Prescription& v) {
    v.id = get_string_or(j, "id");
    v.patient_id = get_string(j, "patient_id");
    v.prescriber_id = get_string_or(j, "prescriber_id");
    v.diagnosis = get_string(j, "diagnosis");
    const auto& items = field(j, "items");
    if (!items.is_array()) bad_field("items", "an array");
    v.items.clear();
    for (const auto& item : items) v.items.push_back(item.get<PrescriptionItem>());
    v.status = optional_field(j, "status") ? get_enum(j, "status", &parse_status)
                                           : PrescriptionStatus::draft;
    v.overrides.clear();
    if (const auto* overrides = optional_field(j, "overrides")) {
        if (!overrides->is_array()) bad_field("overrides", "an array");
        for (const auto& o : *overrides) v.overrides.push_back(o.get<OverrideRecord>());
    }
    v.created_at = optional_field(j, "created_at") ? get_timestamp(j, "created_at") : Timestamp{};
    v.sent_at = get_optional_timestamp(j, "sent_at");
    v.acknowledged_at = get_optional_timestamp(j, "acknowledged_at");
    v.dispensed_at = get_optional_timestamp(j, "dispensed_at");
    v.cancelled_at = get_optional_timestamp(j, "cancelled_at");
    if (const auto* p = optional_field(j, "pharmacist_id")) {
        if (!p->is_string()) bad_field("pharmacist_id", "a string");
        v.pharmacist_id = p->get<std::string>();
    } else {
        v.pharmacist_id.reset();
    }
}

}  // namespace rxtropic
