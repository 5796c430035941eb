/**
 * @file admin_main.cpp
 * @brief rxtropic-admin: operator commands against a store directory
 *
 * Exit status: 0 on success, 1 when the operation is refused (the error code
 * is printed), 2 on a usage error. The store is locked by a running server,
 * so these commands run while it is stopped.
 */

#include "rxtropic/admin/operations.hpp"
#include "rxtropic/domain/error.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace rxtropic;

struct StoreArgs {
    std::string dir;
    bool fast_hash = false;
};

void add_store(CLI::App& cmd, StoreArgs& args) {
    cmd.add_option("--store", args.dir, "store directory")->envname("RXTROPIC_STORE")->required();
}

/// Writes to `path`, or stdout when it is empty or "-".
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::validation, "cannot write '" + path + "'");
    fn(out);
    if (!out.flush()) throw Error(ErrorCode::validation, "cannot write '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rxtropic operator tool"};
    app.require_subcommand(1);

    StoreArgs store_args;

    auto* bootstrap = app.add_subcommand("bootstrap-admin", "create the first administrator");
    add_store(*bootstrap, store_args);
    std::string license;
    std::string password;
    std::string full_name = "Administrator";
    bootstrap->add_option("--license", license, "license number used to log in")->required();
    bootstrap->add_option("--password", password, "initial password (min 8 characters)")
        ->envname("RXTROPIC_ADMIN_PASSWORD")
        ->required();
    bootstrap->add_option("--name", full_name, "display name")->capture_default_str();
    bootstrap->add_flag("--fast-hash", store_args.fast_hash,
                        "cheap password hashing, for throwaway test stores only");

    auto* seed = app.add_subcommand("seed", "load reference data (upsert by name)");
    add_store(*seed, store_args);
    std::string fixture_path;
    seed->add_option("--fixture", fixture_path,
                     "fixture file; the built-in demo formulary when omitted");

    auto* export_audit = app.add_subcommand("export-audit", "write the audit log as JSON lines");
    add_store(*export_audit, store_args);
    std::string audit_out;
    export_audit->add_option("--out", audit_out, "output file (default stdout)");

    auto* export_fixture = app.add_subcommand("export-fixture", "write reference data as a fixture");
    add_store(*export_fixture, store_args);
    std::string fixture_out;
    export_fixture->add_option("--out", fixture_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    SystemClock clock;
    try {
        auto store = store::Store::open(store_args.dir);

        if (*bootstrap) {
            auth::PasswordHasher hasher(store_args.fast_hash ? auth::HashCost::minimal
                                                             : auth::HashCost::interactive);
            std::cout << admin::bootstrap_admin(store, hasher, clock, license, password, full_name)
                      << "\n";
        } else if (*seed) {
            admin::Fixture fixture;
            if (fixture_path.empty()) {
                std::istringstream in{std::string(admin::default_fixture_text())};
                fixture = admin::parse_fixture(in);
            } else {
                std::ifstream in(fixture_path);
                if (!in) throw Error(ErrorCode::parse_error, "cannot read '" + fixture_path + "'");
                fixture = admin::parse_fixture(in);
            }
            std::cout << admin::seed(store, clock, fixture).to_json().dump(2) << "\n";
        } else if (*export_audit) {
            std::size_t lines = 0;
            with_output(audit_out, [&](std::ostream& out) { lines = admin::export_audit(store, out); });
            std::cerr << lines << " audit entries\n";
        } else if (*export_fixture) {
            const auto text = admin::render_fixture(admin::export_fixture(store));
            with_output(fixture_out, [&](std::ostream& out) { out << text; });
        }
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
