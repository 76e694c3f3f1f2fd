#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubic::cli {

/// Batch modes of the command-line front end.
enum class Mode {
    Evolve,
    Sample,
    Compose,
    Verify,
    Generator,
    Dde,
    KernelCk,
    KernelCoeffs,
    KernelResidual,
};

const std::vector<std::string>& mode_names();
std::string to_string(Mode mode);
std::optional<Mode> mode_from_string(const std::string& name);

/// Raised for malformed configuration; carries the offending field name.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message);
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Validated run configuration. Mode-specific parameters stay as JSON text
/// in `raw` and are re-read by the dispatcher after validation; the fields
/// shared by every mode are lifted out and defaulted here.
struct RunConfig {
    Mode mode = Mode::Evolve;
    std::filesystem::path config_dir;  // directory of the config file, for relative paths
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 0;
    double tol = 1e-9;
    double h = 1.0 / 64.0;
    std::string raw;
};

/// Parses and validates a config file. The mode comes from the file's
/// "mode" field or from the subcommand (`mode_override`); if both are given
/// they must agree. Unknown modes, missing required fields and non-finite
/// numbers raise ConfigError naming the field.
RunConfig parse_config(const std::filesystem::path& path,
                       std::optional<Mode> mode_override = std::nullopt);

/// Command-line overrides applied after the file is parsed.
struct Overrides {
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
};
void apply_overrides(RunConfig& config, const Overrides& overrides);

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitError = 2;

/// Runs the configured mode: writes report.json plus mode-specific artifacts
/// into out_dir and returns kExitOk / kExitCheckFailed. Execution problems
/// throw (the binary maps them to kExitError).
int run(const RunConfig& config);

}  // namespace cubic::cli
