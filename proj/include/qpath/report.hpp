// Results documents: a machine-readable JSON body plus a fixed-width table
// rendering. Every numeric cell carries the quantity name, the stage it was
// evaluated at, the complex value, and the tolerance used. Cells produced by
// self-checking commands additionally carry their target and pass flag.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpath/algebra.hpp"

namespace qpath {

struct ReportEntry {
    std::string name;
    std::string stage;
    Complex value{0.0, 0.0};
    double tolerance = 0.0;
    std::optional<Complex> target;
    std::optional<bool> pass;
};

struct Report {
    std::string command;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    std::vector<ReportEntry> entries;

    ReportEntry& add(std::string name, std::string stage, Complex value,
                     double tolerance);
    ReportEntry& add_checked(std::string name, std::string stage, Complex value,
                             Complex target, double tolerance);
};

// True when no checked entry failed.
bool report_passed(const Report& report);

nlohmann::ordered_json report_to_json(const Report& report);
Report report_from_json(const nlohmann::ordered_json& doc);

// Human-readable table; values rendered signed with 6 significant digits.
// Rendering depends only on the parsed document, so a report that round-trips
// through JSON renders byte-identically.
std::string render_table(const Report& report);

}  // namespace qpath
