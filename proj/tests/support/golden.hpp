#pragma once

#include "rxtropic/domain/types.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace rxtropic::testing {

/// Inputs of one hand-written printed-copy golden file.
struct GoldenCase {
    std::string file;
    Prescription prescription;
    Patient patient;
    PractitionerAccount prescriber;
    Disease diagnosis;
    std::map<Id, Drug> drugs;
    Timestamp printed_at{};
};

std::vector<GoldenCase> golden_cases();

std::string read_file(const std::filesystem::path& path);

/// Renders the case and compares it byte for byte with its golden file.
/// Returns an empty string on match, otherwise a short description.
std::string golden_mismatch(const GoldenCase& c, const std::filesystem::path& golden_dir);

}  // namespace rxtropic::testing
