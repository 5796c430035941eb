/**
 * @file criteria_print.cpp
 * @brief Printed copies of three fixture prescriptions against golden files
 *
 * The prescriptions are stored with fixed ids so the golden files can be
 * literal. Comparison ignores only the PRINTED line.
 */

#include "criteria.hpp"

#include "golden.hpp"
#include "world.hpp"

namespace rxtropic::acceptance {

using namespace testing;

namespace {

std::string without_printed_line(const std::string& text) {
    const auto at = text.rfind("PRINTED: ");
    if (at == std::string::npos || (at != 0 && text[at - 1] != '\n')) return text;
    return text.substr(0, at);
}

}  // namespace

Outcome print_golden() {
    World w;
    std::vector<std::string> problems;
    std::size_t bytes = 0;
    for (const auto& c : golden_cases()) {
        // Map the case's drug, patient and prescriber onto the seeded records.
        Prescription rx = c.prescription;
        rx.patient_id = w.patient(c.patient.full_name);
        rx.prescriber_id = c.prescriber.license_number == "DOC-1" ? w.doctor.account_id : w.doctor2.account_id;
        rx.diagnosis = w.disease(c.diagnosis.name);
        for (auto& item : rx.items) item.drug_id = w.drug(c.drugs.at(item.drug_id).name);
        w.store().write([&](store::Transaction& txn) { txn.put(rx); });

        w.clock.set(c.printed_at);
        const auto printed = w.rx().print_copy(w.pharmacist, rx.id);
        const auto again = w.rx().print_copy(w.pharmacist, rx.id);
        const auto golden = read_file(std::filesystem::path(RXTROPIC_GOLDEN_DIR) / c.file);
        bytes += golden.size();
        if (golden.empty()) {
            problems.push_back(c.file + ": missing or empty");
        } else if (without_printed_line(printed) != without_printed_line(golden)) {
            problems.push_back(c.file + ": body differs");
        } else if (printed.substr(printed.rfind("PRINTED: ")).size() != golden.substr(golden.rfind("PRINTED: ")).size()) {
            problems.push_back(c.file + ": timestamp line has the wrong shape");
        }
        if (printed != again) problems.push_back(c.file + ": not deterministic");
    }
    std::string detail = "3 golden files, " + std::to_string(bytes) + " bytes, " + std::to_string(problems.size()) +
                         " mismatches";
    if (!problems.empty()) detail += "; first: " + problems.front();
    return {problems.empty(), detail};
}

}  // namespace rxtropic::acceptance
