/**
 * @file fixture.hpp
 * @brief Line-oriented reference-data fixture format
 *
 * One record per line, fields separated by '|', surrounding whitespace
 * trimmed. Blank lines and lines starting with '#' are ignored. List fields
 * are comma-separated. Records refer to each other by name, never by id.
 *
 *     DISEASE|<name>|<description>
 *     DRUG|<name>|<class>|<generic description>|<indications>|<adverse reactions>|<strength>|<substance codes>
 *     RULE|<drug name>|<drug name>|MAJOR|MODERATE|MINOR|<note>
 *     PATIENT|<full name>|<YYYY-MM-DD>|M|F|OTHER|<allergy codes>
 *
 * No escaping exists: '|' and line breaks cannot appear inside a field, and
 * ',' cannot appear inside a list element.
 */

#pragma once

#include "rxtropic/domain/types.hpp"

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace rxtropic::admin {

struct FixtureDisease {
    std::string name;
    std::string description;
    bool operator==(const FixtureDisease&) const = default;
};

struct FixtureDrug {
    std::string name;
    std::string pharmaceutical_class;
    std::string generic_description;
    std::vector<std::string> indications;  ///< disease names
    std::string adverse_reactions;
    std::string strength;
    std::vector<std::string> substance_codes;
    bool operator==(const FixtureDrug&) const = default;
};

struct FixtureRule {
    std::string drug_a;
    std::string drug_b;
    InteractionSeverity severity = InteractionSeverity::moderate;
    std::string note;
    bool operator==(const FixtureRule&) const = default;
};

struct FixturePatient {
    std::string full_name;
    Date date_of_birth{};
    Sex sex = Sex::other;
    std::vector<std::string> allergies;
    bool operator==(const FixturePatient&) const = default;
};

struct Fixture {
    std::vector<FixtureDisease> diseases;
    std::vector<FixtureDrug> drugs;
    std::vector<FixtureRule> rules;
    std::vector<FixturePatient> patients;
    bool operator==(const Fixture&) const = default;
};

/// Throws Error(PARSE_ERROR) with a "line N: ..." message.
Fixture parse_fixture(std::istream& in);

/// Canonical text form; throws Error(VALIDATION) for unrepresentable fields.
std::string render_fixture(const Fixture& fixture);

/// Built-in demo formulary (three diseases and their drugs). Demo data only.
std::string_view default_fixture_text() noexcept;

/// Sorted records, sorted and normalized lists; equal for equivalent fixtures.
Fixture canonicalize(Fixture fixture);

}  // namespace rxtropic::admin
