#include "rxtropic/workflow/print.hpp"

#include "rxtropic/domain/error.hpp"
#include "rxtropic/domain/time.hpp"

namespace rxtropic::workflow {

std::string render_print(const PrintInput& input, Timestamp printed_at) {
    const auto& rx = input.prescription;
    std::string out;
    out += "RXTROPIC PRESCRIPTION " + rx.id + "\n";
    out += "PATIENT: " + input.patient.full_name + " DOB:" +
           format_date(input.patient.date_of_birth) + "\n";
    out += "PRESCRIBER: " + input.prescriber.full_name + " LIC:" +
           input.prescriber.license_number + "\n";
    out += "DIAGNOSIS: " + input.diagnosis.name + "\n";
    for (const auto& item : rx.items) {
        auto it = input.drugs.find(item.drug_id);
        if (it == input.drugs.end()) {
            throw Error(ErrorCode::unknown_drug, "drug " + item.drug_id + " is not in the formulary");
        }
        out += "- " + it->second.name + " | " + item.dose + " | " + item.frequency + " | " +
               std::to_string(item.duration_days) + "d | " + item.instructions + "\n";
    }
    out += "PRINTED: " + format_timestamp(printed_at) + "\n";
    return out;
}

}  // namespace rxtropic::workflow
