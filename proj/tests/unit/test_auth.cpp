#include <doctest.h>

#include "world.hpp"

#include "rxtropic/domain/error.hpp"

#include <thread>

using namespace rxtropic;
using namespace rxtropic::testing;
using auth::Permission;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::internal;
}

/// The role-permission matrix written out cell by cell.
bool expected_allow(Role role, Permission p) {
    using P = Permission;
    switch (role) {
        case Role::administrator:
            return p == P::manage_users || p == P::manage_drugs || p == P::manage_diseases ||
                   p == P::manage_patients || p == P::manage_interactions ||
                   p == P::view_patient_record || p == P::view_drug_detail;
        case Role::doctor:
            return p == P::view_patient_record || p == P::view_drug_detail || p == P::compose_rx ||
                   p == P::send_rx || p == P::cancel_rx || p == P::manage_drugs;
        case Role::pharmacist:
            return p == P::list_pending || p == P::acknowledge_rx || p == P::dispense_rx ||
                   p == P::print_rx || p == P::view_drug_detail || p == P::view_patient_record;
    }
    return false;
}

}  // namespace

TEST_CASE("permission matrix is total and matches every cell") {
    CHECK(std::size(auth::all_permissions) == 14);
    for (auto role : all_roles) {
        for (auto p : auth::all_permissions) {
            CAPTURE(to_string(role));
            CAPTURE(to_string(p));
            CHECK(auth::permits(role, p) == expected_allow(role, p));
        }
    }
}

TEST_CASE("password digests are salted and verifiable") {
    auth::PasswordHasher hasher(auth::HashCost::minimal);
    const auto a = hasher.digest("s3cret-pass");
    const auto b = hasher.digest("s3cret-pass");
    CHECK(a != b);
    CHECK(a.find("s3cret-pass") == std::string::npos);
    CHECK(hasher.verify(a, "s3cret-pass"));
    CHECK(hasher.verify(b, "s3cret-pass"));
    CHECK_FALSE(hasher.verify(a, "s3cret-pasS"));
    CHECK_FALSE(hasher.verify("garbage", "s3cret-pass"));
    CHECK(code_of([] { auth::require_strong("1234567"); }) == ErrorCode::weak_password);
    auth::require_strong("12345678");
}

TEST_CASE("login") {
    World w(false);
    SUBCASE("administrator with the right password") {
        const auto session = w.sessions().login("ADM-1", test_password);
        CHECK(session.role == Role::administrator);
        CHECK(session.account_id == w.admin.account_id);
        CHECK(session.token.size() >= 32);
        CHECK(session.expires_at > session.issued_at);
    }
    SUBCASE("license lookup ignores case") {
        CHECK(w.sessions().login("adm-1", test_password).role == Role::administrator);
    }
    SUBCASE("wrong password, unknown account and inactive account are indistinguishable") {
        std::vector<std::string> messages;
        auto attempt = [&](const std::string& license, const std::string& password) {
            try {
                w.sessions().login(license, password);
            } catch (const Error& e) {
                CHECK(e.code() == ErrorCode::invalid_credentials);
                messages.push_back(e.what());
                return;
            }
            FAIL("login should fail");
        };
        w.registry().deactivate_practitioner(w.admin, w.doctor2.account_id);
        attempt("ADM-1", "not-the-password");
        attempt("NOBODY", test_password);
        attempt("DOC-2", test_password);
        CHECK(messages[0] == messages[1]);
        CHECK(messages[1] == messages[2]);

        std::vector<std::string> causes;
        for (const auto& e : w.store().audit_scan()) {
            if (e.action == "auth.login_failed") causes.push_back(e.detail.at("cause"));
        }
        CHECK(causes == std::vector<std::string>{"wrong_password", "unknown_account", "inactive"});
    }
}

TEST_CASE("logout is idempotent") {
    World w(false);
    const auto token = w.login(w.doctor);
    CHECK(w.sessions().authorize(token, Permission::compose_rx).account_id == w.doctor.account_id);
    w.sessions().logout(token);
    CHECK(code_of([&] { w.sessions().authorize(token, Permission::compose_rx); }) ==
          ErrorCode::unauthenticated);
    const auto audit_before = w.store().snapshot().audit_count();
    w.sessions().logout(token);
    w.sessions().logout("never-issued");
    CHECK(w.store().snapshot().audit_count() == audit_before);
}

TEST_CASE("authorize examples") {
    World w(false);
    const auto pharmacist = w.login(w.pharmacist);
    const auto doctor = w.login(w.doctor);
    CHECK(code_of([&] { w.sessions().authorize(pharmacist, Permission::compose_rx); }) ==
          ErrorCode::forbidden);
    CHECK(code_of([&] { w.sessions().authorize(doctor, Permission::manage_users); }) ==
          ErrorCode::forbidden);
    CHECK(w.sessions().authorize(doctor, Permission::view_drug_detail).role == Role::doctor);
    CHECK(code_of([&] { w.sessions().authorize("", Permission::view_drug_detail); }) ==
          ErrorCode::unauthenticated);
}

TEST_CASE("sessions expire after the configured lifetime for every permission") {
    World w(false);
    const auto token = w.login(w.admin);
    w.clock.advance(std::chrono::hours{8} - std::chrono::milliseconds{1});
    CHECK_NOTHROW(w.sessions().authenticate(token));
    w.clock.advance(std::chrono::milliseconds{1});
    for (auto p : auth::all_permissions) {
        CHECK(code_of([&] { w.sessions().authorize(token, p); }) == ErrorCode::unauthenticated);
    }
    CHECK(w.sessions().live_sessions() == 0);
}

TEST_CASE("change_password") {
    World w(false);
    const auto token = w.login(w.doctor);
    const auto other = w.login(w.doctor);
    SUBCASE("correct old password, long new password") {
        w.sessions().change_password(token, test_password, "twelve-chars");
        CHECK(code_of([&] { w.sessions().login("DOC-1", test_password); }) ==
              ErrorCode::invalid_credentials);
        CHECK(w.sessions().login("DOC-1", "twelve-chars").account_id == w.doctor.account_id);
        CHECK_NOTHROW(w.sessions().authenticate(token));
        CHECK(code_of([&] { w.sessions().authenticate(other); }) == ErrorCode::unauthenticated);
    }
    SUBCASE("wrong old password") {
        CHECK(code_of([&] { w.sessions().change_password(token, "nope-nope", "twelve-chars"); }) ==
              ErrorCode::invalid_credentials);
    }
    SUBCASE("short new password") {
        CHECK(code_of([&] { w.sessions().change_password(token, test_password, "abcd"); }) ==
              ErrorCode::weak_password);
    }
}

TEST_CASE("deactivating an account ends its sessions") {
    World w(false);
    const auto token = w.login(w.pharmacist);
    w.registry().deactivate_practitioner(w.admin, w.pharmacist.account_id);
    CHECK(code_of([&] { w.sessions().authenticate(token); }) == ErrorCode::unauthenticated);
    CHECK(code_of([&] { w.login(w.pharmacist); }) == ErrorCode::invalid_credentials);
}

TEST_CASE("tokens are unique and authorize runs alongside logins") {
    World w(false);
    std::set<std::string> tokens;
    for (int i = 0; i < 50; ++i) tokens.insert(w.login(w.doctor));
    CHECK(tokens.size() == 50);

    const auto token = *tokens.begin();
    std::atomic<bool> stop{false};
    std::atomic<int> failures{0};
    std::thread reader([&] {
        while (!stop) {
            try {
                w.sessions().authorize(token, Permission::compose_rx);
            } catch (...) {
                ++failures;
            }
        }
    });
    for (int i = 0; i < 50; ++i) w.sessions().logout(w.login(w.pharmacist));
    stop = true;
    reader.join();
    CHECK(failures == 0);
}
