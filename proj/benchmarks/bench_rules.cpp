/**
 * @file bench_rules.cpp
 * @brief Screening cost against formulary size and history length
 */

#include "rxtropic/rules/engine.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace rxtropic;
using namespace std::chrono;

namespace {

struct Inputs {
    rules::Formulary formulary{{}, {}, {}};
    rules::PatientClinicalContext context;
    Prescription candidate;
    Timestamp now = sys_days{year{2026} / 6 / 1};
};

Inputs make_inputs(std::size_t drugs, std::size_t history) {
    std::mt19937_64 rng(42);
    std::vector<Drug> formulary;
    std::vector<InteractionRule> rules;
    for (std::size_t i = 0; i < drugs; ++i) {
        const auto id = "d" + std::to_string(i);
        formulary.push_back({id, "Drug " + std::to_string(i), "c", "", {"dx"}, "", "1 mg",
                             {"sub" + std::to_string(i % 17)}, true});
    }
    for (std::size_t i = 0; i + 1 < drugs; i += 3) {
        rules.push_back({DrugPair("d" + std::to_string(i), "d" + std::to_string(i + 1)),
                         InteractionSeverity::moderate, ""});
    }
    Inputs in;
    in.formulary = rules::Formulary(formulary, {{"dx", "Disease", ""}}, rules);
    in.context.allergies = {"sub3", "sub9"};
    for (std::size_t i = 0; i < history; ++i) {
        const auto drug = "d" + std::to_string(rng() % drugs);
        in.context.active_medications.insert(drug);
        in.context.recent_prescriptions.push_back({drug, in.now - days{static_cast<int>(rng() % 40)}});
    }
    in.candidate.id = "rx";
    in.candidate.diagnosis = "dx";
    for (std::size_t i = 0; i < 6; ++i) {
        in.candidate.items.push_back({"d" + std::to_string((i * 7) % drugs), "1", "daily", 5, ""});
    }
    return in;
}

void BM_Validate(benchmark::State& state) {
    const auto in = make_inputs(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rules::validate(in.candidate, in.context, in.formulary, in.now));
    }
}
BENCHMARK(BM_Validate)->Args({50, 20})->Args({500, 20})->Args({5000, 200});

}  // namespace
