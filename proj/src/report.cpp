#include "qpath/report.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "qpath/errors.hpp"

namespace qpath {

namespace {

using nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%+.6g", v);
    return buf;
}

std::string format_complex(const Complex& v) {
    return format_double(v.real()) + format_double(v.imag()) + "i";
}

ordered_json complex_to_json(const Complex& v) {
    return ordered_json::array({v.real(), v.imag()});
}

Complex complex_from_json(const ordered_json& node, const std::string& where) {
    if (!node.is_array() || node.size() != 2 || !node.at(0).is_number() ||
        !node.at(1).is_number()) {
        throw Error("report: '" + where + "' is not a [re, im] pair");
    }
    return Complex{node.at(0).get<double>(), node.at(1).get<double>()};
}

}  // namespace

ReportEntry& Report::add(std::string name, std::string stage, Complex value,
                         double tolerance) {
    ReportEntry entry;
    entry.name = std::move(name);
    entry.stage = std::move(stage);
    entry.value = value;
    entry.tolerance = tolerance;
    entries.push_back(std::move(entry));
    return entries.back();
}

ReportEntry& Report::add_checked(std::string name, std::string stage,
                                 Complex value, Complex target,
                                 double tolerance) {
    ReportEntry& entry =
        add(std::move(name), std::move(stage), value, tolerance);
    entry.target = target;
    entry.pass = std::abs(value - target) <= tolerance;
    return entry;
}

bool report_passed(const Report& report) {
    for (const ReportEntry& entry : report.entries) {
        if (entry.pass.has_value() && !*entry.pass) return false;
    }
    return true;
}

ordered_json report_to_json(const Report& report) {
    ordered_json doc;
    doc["command"] = report.command;
    if (!report.meta.empty()) doc["meta"] = report.meta;
    ordered_json entries = ordered_json::array();
    for (const ReportEntry& entry : report.entries) {
        ordered_json node;
        node["name"] = entry.name;
        node["stage"] = entry.stage;
        node["value"] = complex_to_json(entry.value);
        node["tolerance"] = entry.tolerance;
        if (entry.target) node["target"] = complex_to_json(*entry.target);
        if (entry.pass) node["pass"] = *entry.pass;
        entries.push_back(node);
    }
    doc["entries"] = entries;
    std::size_t failed = 0;
    for (const ReportEntry& entry : report.entries) {
        if (entry.pass.has_value() && !*entry.pass) ++failed;
    }
    doc["summary"] = {{"entries", report.entries.size()}, {"failed", failed}};
    return doc;
}

Report report_from_json(const ordered_json& doc) {
    Report report;
    if (!doc.is_object() || !doc.contains("command") ||
        !doc.contains("entries")) {
        throw Error("report: document lacks 'command' or 'entries'");
    }
    report.command = doc.at("command").get<std::string>();
    if (doc.contains("meta")) report.meta = doc.at("meta");
    for (const ordered_json& node : doc.at("entries")) {
        ReportEntry entry;
        entry.name = node.at("name").get<std::string>();
        entry.stage = node.at("stage").get<std::string>();
        entry.value = complex_from_json(node.at("value"), entry.name + ".value");
        entry.tolerance = node.at("tolerance").get<double>();
        if (node.contains("target")) {
            entry.target =
                complex_from_json(node.at("target"), entry.name + ".target");
        }
        if (node.contains("pass")) entry.pass = node.at("pass").get<bool>();
        report.entries.push_back(std::move(entry));
    }
    return report;
}

std::string render_table(const Report& report) {
    std::size_t name_width = 4;
    std::size_t stage_width = 5;
    for (const ReportEntry& entry : report.entries) {
        name_width = std::max(name_width, entry.name.size());
        stage_width = std::max(stage_width, entry.stage.size());
    }
    const std::size_t value_width = 24;

    auto pad = [](const std::string& s, std::size_t width) {
        std::string out = s;
        while (out.size() < width) out.push_back(' ');
        return out;
    };

    std::string out;
    out += "# " + report.command + "\n";
    out += pad("name", name_width) + "  " + pad("stage", stage_width) + "  " +
           pad("value", value_width) + "  " + pad("target", value_width) +
           "  " + pad("tol", 9) + "  status\n";
    for (const ReportEntry& entry : report.entries) {
        out += pad(entry.name, name_width) + "  ";
        out += pad(entry.stage, stage_width) + "  ";
        out += pad(format_complex(entry.value), value_width) + "  ";
        out += pad(entry.target ? format_complex(*entry.target) : "-",
                   value_width) + "  ";
        char tol[32];
        std::snprintf(tol, sizeof(tol), "%-9.1e", entry.tolerance);
        out += tol;
        out += "  ";
        if (entry.pass.has_value()) {
            out += *entry.pass ? "ok" : "FAIL";
        } else {
            out += "-";
        }
        out += "\n";
    }
    std::size_t failed = 0;
    std::size_t checked = 0;
    for (const ReportEntry& entry : report.entries) {
        if (entry.pass.has_value()) {
            ++checked;
            if (!*entry.pass) ++failed;
        }
    }
    if (checked > 0) {
        out += "checked " + std::to_string(checked) + ", failed " +
               std::to_string(failed) + "\n";
    }
    return out;
}

}  // namespace qpath
