#include "cubicproc/report.hpp"

#include <json.hpp>

namespace cubic {

using nlohmann::json;

CheckRecord CheckRecord::make(std::string name, double statistic, double tolerance) {
    CheckRecord c;
    c.name = std::move(name);
    c.statistic = statistic;
    c.tolerance = tolerance;
    c.pass = statistic <= tolerance;
    return c;
}

bool Report::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

CheckRecord& Report::add(std::string name, double statistic, double tolerance) {
    checks.push_back(CheckRecord::make(std::move(name), statistic, tolerance));
    return checks.back();
}

std::string to_json_string(const Report& report) {
    json j;
    j["mode"] = report.mode;
    j["version"] = report.version;
    j["seed"] = report.seed;
    j["all_pass"] = report.all_pass();
    json checks = json::array();
    for (const auto& c : report.checks) {
        json jc;
        jc["name"] = c.name;
        jc["statistic"] = c.statistic;
        jc["tolerance"] = c.tolerance;
        jc["pass"] = c.pass;
        if (!c.metadata.empty()) jc["metadata"] = c.metadata;
        if (!c.note.empty()) jc["note"] = c.note;
        checks.push_back(std::move(jc));
    }
    j["checks"] = std::move(checks);
    return j.dump(2) + "\n";
}

Report report_from_json_string(const std::string& text) {
    const json j = json::parse(text);
    Report report;
    report.mode = j.at("mode").get<std::string>();
    report.version = j.at("version").get<std::string>();
    report.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& jc : j.at("checks")) {
        CheckRecord c;
        c.name = jc.at("name").get<std::string>();
        c.statistic = jc.at("statistic").get<double>();
        c.tolerance = jc.at("tolerance").get<double>();
        c.pass = jc.at("pass").get<bool>();
        if (jc.contains("metadata"))
            c.metadata = jc.at("metadata").get<std::map<std::string, double>>();
        if (jc.contains("note")) c.note = jc.at("note").get<std::string>();
        report.checks.push_back(std::move(c));
    }
    return report;
}

}  // namespace cubic
