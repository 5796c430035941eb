/**
 * @file bench_auth.cpp
 * @brief Per-request authorization and login hashing cost
 */

#include "rxtropic/admin/operations.hpp"
#include "rxtropic/auth/authenticator.hpp"

#include <benchmark/benchmark.h>

#include <cstdlib>
#include <filesystem>

using namespace rxtropic;

namespace {

struct AuthFixture {
    std::filesystem::path dir;
    ManualClock clock{Timestamp{}};
    std::optional<store::Store> store;
    auth::PasswordHasher hasher;
    std::optional<auth::Authenticator> sessions;

    explicit AuthFixture(auth::HashCost cost) : hasher(cost) {
        std::string pattern = (std::filesystem::temp_directory_path() / "rxtropic-bench-XXXXXX").string();
        if (!mkdtemp(pattern.data())) throw std::runtime_error("mkdtemp failed");
        dir = pattern;
        store.emplace(store::Store::open(dir, {.full_sync = false}));
        admin::bootstrap_admin(*store, hasher, clock, "ADM-1", "bench-password");
        sessions.emplace(*store, clock, hasher);
    }
    ~AuthFixture() {
        sessions.reset();
        store.reset();
        std::filesystem::remove_all(dir);
    }
};

void BM_Authorize(benchmark::State& state) {
    static AuthFixture f(auth::HashCost::minimal);
    static const auto token = f.sessions->login("ADM-1", "bench-password").token;
    for (auto _ : state) {
        benchmark::DoNotOptimize(f.sessions->authorize(token, auth::Permission::view_drug_detail));
    }
}
BENCHMARK(BM_Authorize)->Threads(1)->Threads(8);

void BM_LoginInteractiveHash(benchmark::State& state) {
    AuthFixture f(auth::HashCost::interactive);
    for (auto _ : state) benchmark::DoNotOptimize(f.sessions->login("ADM-1", "bench-password"));
}
BENCHMARK(BM_LoginInteractiveHash)->Unit(benchmark::kMillisecond)->Iterations(5);

}  // namespace
