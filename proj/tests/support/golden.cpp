#include "golden.hpp"

#include "rxtropic/workflow/print.hpp"

#include <fstream>
#include <sstream>

namespace rxtropic::testing {

using namespace std::chrono;

namespace {

Drug drug(const Id& id, const std::string& name) {
    return {id, name, "class", "", {}, "", "", {}, true};
}

Prescription rx(const Id& id, std::vector<PrescriptionItem> items) {
    Prescription p;
    p.id = id;
    p.patient_id = "patient";
    p.prescriber_id = "prescriber";
    p.diagnosis = "disease";
    p.items = std::move(items);
    p.status = PrescriptionStatus::sent;
    p.created_at = sys_days{year{2026} / 1 / 5};
    p.sent_at = p.created_at;
    return p;
}

}  // namespace

std::vector<GoldenCase> golden_cases() {
    const PractitionerAccount dana{"prescriber", "Dana Doctor", Role::doctor, "DOC-1", "", true, {}};
    std::vector<GoldenCase> out;

    out.push_back({"print_single_item.txt",
                   rx("rx-0001", {{"d1", "2.4 mg/kg", "once daily", 3, "intravenous, slow push"}}),
                   {"patient", "Amina Yusuf", year{1990} / 9 / 9, Sex::female, {}, true},
                   dana,
                   {"disease", "Malaria", ""},
                   {{"d1", drug("d1", "Artesunate")}},
                   sys_days{year{2026} / 1 / 5} + hours{9} + minutes{30}});

    out.push_back({"print_two_items.txt",
                   rx("rx-0002", {{"d1", "4 tablets", "twice daily", 3, "with fatty food"},
                                  {"d2", "1 tablet", "three times daily", 7, ""}}),
                   {"patient", "Kwame Boateng", year{1972} / 11 / 2, Sex::male, {}, true},
                   dana,
                   {"disease", "Malaria", ""},
                   {{"d1", drug("d1", "Artemether/Lumefantrine")}, {"d2", drug("d2", "Quinine")}},
                   sys_days{year{2026} / 1 / 5} + hours{10} + minutes{15} + seconds{42} +
                       milliseconds{250}});

    out.push_back({"print_three_items.txt",
                   rx("rx-0003", {{"z", "500 mg", "twice daily", 10, "avoid antacids within 2 h"},
                                  {"a", "1 g", "every 6 h as needed", 2, "max 4 g per day"},
                                  {"m", "500 mg", "once daily", 7, ""}}),
                   {"patient", "Chidi Okafor", year{2001} / 6 / 30, Sex::male, {"chloroquine"}, true},
                   {"prescriber", "Dele Doctor", Role::doctor, "DOC-2", "", true, {}},
                   {"disease", "Typhoid fever", ""},
                   {{"z", drug("z", "Ciprofloxacin")}, {"a", drug("a", "Paracetamol")},
                    {"m", drug("m", "Azithromycin")}},
                   sys_days{year{2026} / 12 / 31} + hours{23} + minutes{59} + seconds{59} +
                       milliseconds{999}});
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string golden_mismatch(const GoldenCase& c, const std::filesystem::path& golden_dir) {
    const auto path = golden_dir / c.file;
    if (!std::filesystem::exists(path)) return c.file + ": golden file missing";
    const auto expected = read_file(path);
    const auto actual = workflow::render_print(
        {c.prescription, c.patient, c.prescriber, c.diagnosis, c.drugs}, c.printed_at);
    if (actual == expected) return {};
    std::size_t at = 0;
    while (at < actual.size() && at < expected.size() && actual[at] == expected[at]) ++at;
    return c.file + ": first difference at byte " + std::to_string(at);
}

}  // namespace rxtropic::testing
