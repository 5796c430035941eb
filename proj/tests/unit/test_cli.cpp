#include <doctest.h>

#include "process.hpp"
#include "temp_dir.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <csignal>
#include <fstream>
#include <sstream>

using namespace rxtropic::testing;
using namespace std::chrono_literals;

namespace {

const std::string admin_bin = RXTROPIC_ADMIN_BIN;
const std::string server_bin = RXTROPIC_SERVER_BIN;

ProcessResult admin(std::vector<std::string> args, std::vector<std::string> env = {}) {
    args.insert(args.begin(), admin_bin);
    return run_process(args, env);
}

std::size_t count_lines(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("admin exit codes") {
    TempDir dir;
    const auto store = (dir.path() / "store").string();
    CHECK(admin({}).exit_code == 2);
    CHECK(admin({"frobnicate"}).exit_code == 2);
    CHECK(admin({"seed"}).exit_code == 2);

    const auto first = admin({"bootstrap-admin", "--store", store, "--license", "ADM-1", "--fast-hash"},
                             {"RXTROPIC_ADMIN_PASSWORD=long-enough-pass"});
    CHECK(first.exit_code == 0);
    CHECK(first.out.size() >= 32);

    const auto again = admin({"bootstrap-admin", "--store", store, "--license", "ADM-2", "--password",
                              "long-enough-pass", "--fast-hash"});
    CHECK(again.exit_code == 1);
    CHECK(again.err.find("ALREADY_BOOTSTRAPPED") != std::string::npos);

    const auto weak = admin({"bootstrap-admin", "--store", (dir.path() / "other").string(), "--license",
                             "ADM-1", "--password", "abc", "--fast-hash"});
    CHECK(weak.exit_code == 1);
}

TEST_CASE("seed, export-fixture and export-audit") {
    TempDir dir;
    const auto store = (dir.path() / "store").string();
    const auto audit_path = dir.path() / "audit.jsonl";

    CHECK(admin({"export-audit", "--store", store, "--out", audit_path.string()}).exit_code == 0);
    CHECK(slurp(audit_path).empty());

    const auto seeded = admin({"seed"}, {"RXTROPIC_STORE=" + store});
    REQUIRE(seeded.exit_code == 0);
    const auto report = nlohmann::json::parse(seeded.out);
    CHECK(report.at("diseases").at("created") == 3);
    CHECK(report.at("interactions").at("created") == 6);
    const std::size_t created = 3 + 12 + 6 + 4;

    const auto reseeded = admin({"seed", "--store", store});
    CHECK(nlohmann::json::parse(reseeded.out).at("drugs").at("unchanged") == 12);

    const auto a = admin({"export-audit", "--store", store});
    const auto b = admin({"export-audit", "--store", store});
    CHECK(a.exit_code == 0);
    CHECK(count_lines(a.out) == created);
    CHECK(a.out == b.out);

    const auto fixture_path = dir.path() / "exported.rxf";
    CHECK(admin({"export-fixture", "--store", store, "--out", fixture_path.string()}).exit_code == 0);
    const auto copy = (dir.path() / "copy").string();
    CHECK(admin({"seed", "--store", copy, "--fixture", fixture_path.string()}).exit_code == 0);
    CHECK(admin({"export-fixture", "--store", copy}).out == slurp(fixture_path));

    const auto bad_fixture = dir.path() / "bad.rxf";
    std::ofstream(bad_fixture) << "DISEASE|x|y\nDRUG|broken\n";
    const auto bad = admin({"seed", "--store", store, "--fixture", bad_fixture.string()});
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("line 2") != std::string::npos);
}

TEST_CASE("server lifecycle") {
    TempDir dir;
    const auto store = (dir.path() / "store").string();
    REQUIRE(admin({"seed", "--store", store}).exit_code == 0);
    const int port = free_port();
    const auto bind = "127.0.0.1:" + std::to_string(port);

    Child server({server_bin, "--bind", bind, "--store", store});
    REQUIRE(wait_healthy(port, 10s));

    SUBCASE("the held store refuses the admin tool") {
        const auto r = admin({"seed", "--store", store});
        CHECK(r.exit_code == 1);
        CHECK(r.err.find("STORE_UNAVAILABLE") != std::string::npos);
    }
    SUBCASE("a second server on the busy port exits nonzero") {
        const auto other = (dir.path() / "other").string();
        const auto r = run_process({server_bin, "--bind", bind, "--store", other});
        CHECK(r.exit_code != 0);
    }
    SUBCASE("termination is graceful") {
        server.signal(SIGTERM);
        const auto done = server.wait_for(10s);
        REQUIRE(done.has_value());
        CHECK(done->exit_code == 0);
        CHECK(admin({"export-audit", "--store", store}).exit_code == 0);
    }
}

TEST_CASE("server startup failures") {
    TempDir dir;
    CHECK(run_process({server_bin}).exit_code == 2);
    const auto not_a_dir = dir.path() / "file";
    std::ofstream(not_a_dir) << "x";
    const auto r = run_process({server_bin, "--bind", "127.0.0.1:0", "--store", not_a_dir.string()});
    CHECK(r.exit_code == 1);
    CHECK(run_process({server_bin, "--bind", "nonsense", "--store", (dir.path() / "s").string()}).exit_code != 0);
}
