#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cubic {

inline constexpr const char* kVersion = "0.1.0";

/// One named check: a statistic, the tolerance it was held to, and the
/// verdict. Metadata carries auxiliary numbers (convergence ratios,
/// truncation defects, per-case values) under stable keys.
struct CheckRecord {
    std::string name;
    double statistic = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::map<std::string, double> metadata;
    std::string note;

    static CheckRecord make(std::string name, double statistic, double tolerance);
};

struct Report {
    std::string mode;
    std::string version = kVersion;
    std::uint64_t seed = 0;
    std::vector<CheckRecord> checks;

    bool all_pass() const;
    CheckRecord& add(std::string name, double statistic, double tolerance);
};

std::string to_json_string(const Report& report);
Report report_from_json_string(const std::string& text);

}  // namespace cubic
