#include <doctest.h>

#include "rxtropic/domain/error.hpp"
#include "rxtropic/domain/ids.hpp"
#include "rxtropic/domain/json.hpp"
#include "rxtropic/domain/time.hpp"
#include "rxtropic/domain/validation.hpp"

#include <random>

using namespace rxtropic;
using namespace std::chrono;

namespace {

const Timestamp t0 = sys_days{year{2026} / 2 / 1} + hours{9};

Prescription valid_rx() {
    Prescription rx;
    rx.id = "rx1";
    rx.patient_id = "p1";
    rx.prescriber_id = "d1";
    rx.diagnosis = "malaria";
    rx.items = {{"drugA", "1 tab", "bid", 3, ""}};
    rx.created_at = t0;
    return rx;
}

}  // namespace

TEST_CASE("enumerations have exactly the wire names") {
    CHECK(std::size(all_roles) == 3);
    CHECK(to_string(Role::administrator) == "ADMINISTRATOR");
    CHECK(to_string(Role::doctor) == "DOCTOR");
    CHECK(to_string(Role::pharmacist) == "PHARMACIST");
    CHECK(to_string(PrescriptionStatus::acknowledged) == "ACKNOWLEDGED");
    CHECK(to_string(Sex::female) == "F");
    CHECK(to_string(FindingKind::duplicate) == "DUPLICATE");
    for (auto role : all_roles) CHECK(parse_role(to_string(role)) == role);
    for (auto status : all_statuses) CHECK(parse_status(to_string(status)) == status);
    for (auto kind : all_finding_kinds) CHECK(parse_finding_kind(to_string(kind)) == kind);
    CHECK_FALSE(parse_role("PATIENT").has_value());
    CHECK_FALSE(parse_status("draft").has_value());
}

TEST_CASE("validate_entity examples") {
    SUBCASE("prescription with empty items") {
        auto rx = valid_rx();
        rx.items.clear();
        CHECK(validate_entity(rx) == std::vector<std::string>{"items must be nonempty"});
    }
    SUBCASE("interaction rule with identical drugs") {
        InteractionRule rule{DrugPair("a", "a"), InteractionSeverity::minor, ""};
        CHECK(validate_entity(rule) == std::vector<std::string>{"pair drugs must be distinct"});
    }
    SUBCASE("well-formed drug with two indications") {
        Drug drug{"d1", "Quinine", "Antimalarial", "", {"malaria", "typhoid"}, "", "300 mg", {"quinine"}, true};
        CHECK(validate_entity(drug).empty());
    }
}

TEST_CASE("prescription invariants") {
    SUBCASE("repeated drug") {
        auto rx = valid_rx();
        rx.items.push_back(rx.items.front());
        CHECK(validate_entity(rx) == std::vector<std::string>{"items must not repeat a drug"});
    }
    SUBCASE("duration below one day") {
        auto rx = valid_rx();
        rx.items.front().duration_days = 0;
        CHECK_FALSE(validate_entity(rx).empty());
    }
    SUBCASE("pharmacist present exactly when acknowledged or dispensed") {
        auto rx = valid_rx();
        rx.status = PrescriptionStatus::sent;
        rx.sent_at = t0 + minutes{1};
        CHECK(validate_entity(rx).empty());
        rx.pharmacist_id = "ph";
        CHECK_FALSE(validate_entity(rx).empty());
        rx.status = PrescriptionStatus::acknowledged;
        rx.acknowledged_at = t0 + minutes{2};
        CHECK(validate_entity(rx).empty());
        rx.pharmacist_id.reset();
        CHECK_FALSE(validate_entity(rx).empty());
    }
    SUBCASE("timestamps run forwards") {
        auto rx = valid_rx();
        rx.status = PrescriptionStatus::sent;
        rx.sent_at = t0 - minutes{1};
        CHECK(validate_entity(rx) == std::vector<std::string>{"lifecycle timestamps must be monotone"});
    }
    SUBCASE("override needs a reason") {
        OverrideRecord record{FindingKind::interaction, "  ", "d1", t0};
        CHECK_FALSE(validate_entity(record).empty());
    }
    SUBCASE("allergy findings must block") {
        ValidationFinding f{FindingKind::allergy, FindingSeverity::warn, "x", {"d"}};
        CHECK_FALSE(validate_entity(f).empty());
        f.severity = FindingSeverity::block;
        CHECK(validate_entity(f).empty());
        f.subject_drug_ids.clear();
        CHECK_FALSE(validate_entity(f).empty());
    }
}

TEST_CASE("patient date of birth is not in the future") {
    Patient p{"p1", "Ama", year{2030} / 1 / 1, Sex::female, {}, true};
    CHECK_FALSE(validate_entity(p, year{2026} / 1 / 1).empty());
    p.date_of_birth = year{2026} / 1 / 1;
    CHECK(validate_entity(p, year{2026} / 1 / 1).empty());
    p.allergies = {"Penicillin"};
    CHECK_FALSE(validate_entity(p, year{2026} / 1 / 1).empty());
}

TEST_CASE("transition relation is exactly the five edges") {
    using S = PrescriptionStatus;
    const std::set<std::pair<S, S>> edges = {{S::draft, S::sent},
                                             {S::draft, S::cancelled},
                                             {S::sent, S::acknowledged},
                                             {S::sent, S::cancelled},
                                             {S::acknowledged, S::dispensed}};
    for (auto from : all_statuses) {
        for (auto to : all_statuses) {
            CAPTURE(to_string(from));
            CAPTURE(to_string(to));
            CHECK(is_legal_transition(from, to) == edges.contains({from, to}));
        }
    }
    CHECK(is_terminal(S::dispensed));
    CHECK(is_terminal(S::cancelled));
    CHECK_FALSE(is_terminal(S::acknowledged));
}

TEST_CASE("drug pairs are unordered") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const auto a = new_id();
        const auto b = new_id();
        CHECK(DrugPair(a, b) == DrugPair(b, a));
        CHECK(DrugPair(a, b).key() == DrugPair(b, a).key());
        CHECK(DrugPair(a, b).contains(a));
        CHECK(DrugPair(a, b).contains(b));
        CHECK(DrugPair(a, b).first() <= DrugPair(a, b).second());
    }
}

TEST_CASE("ids are 128-bit lowercase hex and distinct") {
    std::set<Id> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto id = new_id();
        REQUIRE(id.size() == 32);
        CHECK(id.find_first_not_of("0123456789abcdef") == std::string::npos);
        seen.insert(id);
    }
    CHECK(seen.size() == 1000);
}

TEST_CASE("timestamps are ISO-8601 UTC with milliseconds") {
    const Timestamp ts = sys_days{year{2026} / 10 / 17} + hours{13} + minutes{5} + seconds{9} +
                         milliseconds{42};
    CHECK(format_timestamp(ts) == "2026-10-17T13:05:09.042Z");
    CHECK(parse_timestamp("2026-10-17T13:05:09.042Z") == ts);
    CHECK(parse_timestamp("2026-10-17T13:05:09Z") == ts - milliseconds{42});
    CHECK_FALSE(parse_timestamp("2026-10-17T13:05:09").has_value());
    CHECK_FALSE(parse_timestamp("2026-02-30T00:00:00Z").has_value());
    CHECK(format_date(year{2001} / 6 / 3) == "2001-06-03");
    CHECK(parse_date("2001-06-03") == year_month_day{year{2001} / 6 / 3});
    CHECK_FALSE(parse_date("2001-13-03").has_value());
    CHECK(to_date(ts) == year_month_day{year{2026} / 10 / 17});
}

TEST_CASE("manual clock moves only when told") {
    ManualClock clock(t0);
    CHECK(clock.now() == t0);
    clock.advance(seconds{5});
    CHECK(clock.now() == t0 + seconds{5});
    clock.set(t0);
    CHECK(clock.now() == t0);
}

TEST_CASE("JSON mapping round-trips every record kind") {
    auto rx = valid_rx();
    rx.status = PrescriptionStatus::dispensed;
    rx.sent_at = t0 + minutes{1};
    rx.acknowledged_at = t0 + minutes{2};
    rx.dispensed_at = t0 + minutes{3};
    rx.pharmacist_id = "ph";
    rx.overrides = {{FindingKind::indication, "off label", "d1", t0}};
    CHECK(nlohmann::json(rx).get<Prescription>() == rx);

    Patient p{"p1", "Ama Mensah", year{1985} / 3 / 14, Sex::female, {"cephalosporin"}, true};
    CHECK(nlohmann::json(p).get<Patient>() == p);

    Drug d{"d1", "Quinine", "c", "g", {"m"}, "a", "300 mg", {"quinine"}, false};
    CHECK(nlohmann::json(d).get<Drug>() == d);

    InteractionRule r{DrugPair("x", "y"), InteractionSeverity::major, "note"};
    CHECK(nlohmann::json(r).get<InteractionRule>() == r);

    ValidationFinding f{FindingKind::interaction, FindingSeverity::warn, "m", {"x", "y"}};
    CHECK(nlohmann::json(f).get<ValidationFinding>() == f);
}

TEST_CASE("JSON mapping rejects malformed input with VALIDATION") {
    auto code_of = [](const nlohmann::json& j) {
        try {
            (void)j.get<Patient>();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::internal;
    };
    CHECK(code_of(nlohmann::json::array()) == ErrorCode::validation);
    CHECK(code_of({{"full_name", 3}}) == ErrorCode::validation);
    CHECK(code_of({{"full_name", "a"}, {"date_of_birth", "yesterday"}, {"sex", "F"}}) ==
          ErrorCode::validation);
    CHECK(code_of({{"full_name", "a"}, {"date_of_birth", "2000-01-01"}, {"sex", "F"},
                   {"allergies", {"x", "X"}}}) == ErrorCode::validation);
}

TEST_CASE("public account view hides the digest") {
    PractitionerAccount a{"id", "Dana", Role::doctor, "DOC-1", "$argon2id$secret", true, t0};
    const auto view = public_view(a);
    CHECK_FALSE(view.contains("password_digest"));
    CHECK(view.dump().find("argon2") == std::string::npos);
}

TEST_CASE("error codes carry their wire names") {
    CHECK(to_string(ErrorCode::overrides_required) == "OVERRIDES_REQUIRED");
    CHECK(to_string(ErrorCode::not_acknowledging_pharmacist) == "NOT_ACKNOWLEDGING_PHARMACIST");
    const Error e(ErrorCode::blocked, "no", {{FindingKind::allergy, FindingSeverity::block, "m", {"d"}}});
    CHECK(e.findings().size() == 1);
}
