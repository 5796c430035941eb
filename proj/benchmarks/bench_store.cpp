/**
 * @file bench_store.cpp
 * @brief Write-path cost: audit appends and status transitions
 */

#include "rxtropic/domain/ids.hpp"
#include "rxtropic/store/store.hpp"

#include <benchmark/benchmark.h>

#include <cstdlib>
#include <filesystem>

using namespace rxtropic;

namespace {

std::filesystem::path scratch() {
    std::string pattern = (std::filesystem::temp_directory_path() / "rxtropic-bench-XXXXXX").string();
    if (!mkdtemp(pattern.data())) throw std::runtime_error("mkdtemp failed");
    return pattern;
}

void BM_AuditAppend(benchmark::State& state) {
    const auto dir = scratch();
    {
        auto store = store::Store::open(dir, {.full_sync = state.range(0) != 0});
        const store::AuditDraft draft{{}, "bench", "bench.append", "bench", "e", {{"n", 1}}};
        for (auto _ : state) benchmark::DoNotOptimize(store.audit_append(draft));
    }
    std::filesystem::remove_all(dir);
}
BENCHMARK(BM_AuditAppend)->Arg(0)->Arg(1)->ArgName("full_sync");

void BM_SendTransition(benchmark::State& state) {
    const auto dir = scratch();
    {
        auto store = store::Store::open(dir, {.full_sync = false});
        const Timestamp t0{};
        for (auto _ : state) {
            state.PauseTiming();
            Prescription rx;
            rx.id = new_id();
            rx.patient_id = "p";
            rx.prescriber_id = "d";
            rx.diagnosis = "dx";
            rx.items = {{"drug", "1", "daily", 3, ""}};
            rx.created_at = t0;
            store.write([&](store::Transaction& txn) { txn.put(rx); });
            state.ResumeTiming();
            store.transition(rx.id, PrescriptionStatus::draft, PrescriptionStatus::sent,
                             [&](Prescription& p, const store::Reader&, nlohmann::json&) { p.sent_at = t0; },
                             {t0, "d", "prescription.send", {}, {}, nlohmann::json::object()});
        }
    }
    std::filesystem::remove_all(dir);
}
BENCHMARK(BM_SendTransition);

}  // namespace
