#include "rxtropic/admin/fixture.hpp"

#include "rxtropic/domain/error.hpp"
#include "rxtropic/domain/time.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

namespace rxtropic::admin {

namespace {

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return std::string(text.substr(first, last - first + 1));
}

bool valid_utf8(const std::string& text) {
    try {
        (void)nlohmann::json(text).dump();
        return true;
    } catch (const nlohmann::json::type_error&) {
        return false;
    }
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    if (trim(text).empty()) return out;
    for (auto& element : split(text, ',')) {
        if (!element.empty()) out.push_back(std::move(element));
    }
    return out;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& message) {
    throw Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": " + message);
}

void expect_fields(const std::vector<std::string>& fields, std::size_t count, std::size_t line) {
    if (fields.size() != count) {
        parse_error(line, fields[0] + " expects " + std::to_string(count - 1) + " fields, got " +
                              std::to_string(fields.size() - 1));
    }
}

void require_name(const std::string& value, std::string_view what, std::size_t line) {
    if (value.empty()) parse_error(line, std::string(what) + " must be nonempty");
}

void check_field(std::string_view value) {
    if (value.find_first_of("|\n\r") != std::string_view::npos) {
        throw Error(ErrorCode::validation,
                    "field '" + std::string(value) + "' cannot be written to a fixture");
    }
}

std::string join_list(const std::vector<std::string>& values) {
    std::string out;
    for (const auto& v : values) {
        check_field(v);
        if (v.find(',') != std::string::npos) {
            throw Error(ErrorCode::validation,
                        "list element '" + v + "' cannot be written to a fixture");
        }
        if (!out.empty()) out += ",";
        out += v;
    }
    return out;
}

void sort_keys(std::vector<std::string>& values) {
    for (auto& v : values) v = name_key(v);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
}

}  // namespace

Fixture parse_fixture(std::istream& in) {
    Fixture fixture;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto text = trim(raw);
        if (text.empty() || text.front() == '#') continue;
        if (!valid_utf8(text)) parse_error(line, "text is not valid UTF-8");
        const auto fields = split(text, '|');
        const auto& kind = fields[0];

        if (kind == "DISEASE") {
            expect_fields(fields, 3, line);
            require_name(fields[1], "disease name", line);
            fixture.diseases.push_back({fields[1], fields[2]});
        } else if (kind == "DRUG") {
            expect_fields(fields, 8, line);
            require_name(fields[1], "drug name", line);
            fixture.drugs.push_back({fields[1], fields[2], fields[3], split_list(fields[4]), fields[5],
                                     fields[6], split_list(fields[7])});
        } else if (kind == "RULE") {
            expect_fields(fields, 5, line);
            require_name(fields[1], "first drug", line);
            require_name(fields[2], "second drug", line);
            auto severity = parse_interaction_severity(fields[3]);
            if (!severity) parse_error(line, "unknown severity '" + fields[3] + "'");
            if (name_key(fields[1]) == name_key(fields[2])) {
                parse_error(line, "pair drugs must be distinct");
            }
            fixture.rules.push_back({fields[1], fields[2], *severity, fields[4]});
        } else if (kind == "PATIENT") {
            expect_fields(fields, 5, line);
            require_name(fields[1], "patient name", line);
            auto dob = parse_date(fields[2]);
            if (!dob) parse_error(line, "date of birth must be YYYY-MM-DD");
            auto sex = parse_sex(fields[3]);
            if (!sex) parse_error(line, "sex must be M, F or OTHER");
            fixture.patients.push_back({fields[1], *dob, *sex, split_list(fields[4])});
        } else {
            parse_error(line, "unknown record kind '" + kind + "'");
        }
    }
    return fixture;
}

std::string render_fixture(const Fixture& fixture) {
    std::ostringstream out;
    out << "# rxtropic reference data\n";
    for (const auto& d : fixture.diseases) {
        check_field(d.name);
        check_field(d.description);
        out << "DISEASE|" << d.name << "|" << d.description << "\n";
    }
    for (const auto& d : fixture.drugs) {
        for (const auto* f : {&d.name, &d.pharmaceutical_class, &d.generic_description,
                              &d.adverse_reactions, &d.strength}) {
            check_field(*f);
        }
        out << "DRUG|" << d.name << "|" << d.pharmaceutical_class << "|" << d.generic_description
            << "|" << join_list(d.indications) << "|" << d.adverse_reactions << "|" << d.strength
            << "|" << join_list(d.substance_codes) << "\n";
    }
    for (const auto& r : fixture.rules) {
        check_field(r.drug_a);
        check_field(r.drug_b);
        check_field(r.note);
        out << "RULE|" << r.drug_a << "|" << r.drug_b << "|" << to_string(r.severity) << "|"
            << r.note << "\n";
    }
    for (const auto& p : fixture.patients) {
        check_field(p.full_name);
        out << "PATIENT|" << p.full_name << "|" << format_date(p.date_of_birth) << "|"
            << to_string(p.sex) << "|" << join_list(p.allergies) << "\n";
    }
    return out.str();
}

Fixture canonicalize(Fixture fixture) {
    for (auto& d : fixture.drugs) {
        sort_keys(d.indications);
        sort_keys(d.substance_codes);
    }
    for (auto& r : fixture.rules) {
        r.drug_a = name_key(r.drug_a);
        r.drug_b = name_key(r.drug_b);
        if (r.drug_b < r.drug_a) std::swap(r.drug_a, r.drug_b);
    }
    for (auto& p : fixture.patients) sort_keys(p.allergies);

    auto by_name = [](const auto& a, const auto& b) { return name_key(a.name) < name_key(b.name); };
    std::sort(fixture.diseases.begin(), fixture.diseases.end(), by_name);
    std::sort(fixture.drugs.begin(), fixture.drugs.end(), by_name);
    std::sort(fixture.rules.begin(), fixture.rules.end(), [](const auto& a, const auto& b) {
        return std::tie(a.drug_a, a.drug_b) < std::tie(b.drug_a, b.drug_b);
    });
    std::sort(fixture.patients.begin(), fixture.patients.end(), [](const auto& a, const auto& b) {
        const auto ka = name_key(a.full_name);
        const auto kb = name_key(b.full_name);
        return ka != kb ? ka < kb : a.date_of_birth < b.date_of_birth;
    });
    return fixture;
}

}  // namespace rxtropic::admin
