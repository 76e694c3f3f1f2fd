// cubicproc: batch front end for the cubic process library.
//
// Usage: cubicproc <mode> --config <file> [--out <dir>] [--seed <n>] [--tol <x>]
// Subcommand names equal the config modes; the mode may also live in the
// config file itself. Data goes to files, diagnostics to stderr. Exit codes:
// 0 all checks passed, 1 at least one check failed, 2 execution error.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cubicproc/cli.hpp"

int main(int argc, char** argv) {
    using cubic::cli::Mode;

    CLI::App app{"cubic stochastic process toolbox"};
    app.require_subcommand(0, 1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;

    app.add_option("--config", config_path, "configuration file (JSON)");
    app.add_option("--out", out_dir, "output directory (overrides the config)");
    auto* seed_opt = app.add_option("--seed", "random seed (overrides the config)");
    auto* tol_opt = app.add_option("--tol", "tolerance (overrides the config)");

    std::optional<Mode> mode;
    for (const auto& name : cubic::cli::mode_names()) {
        auto* sub = app.add_subcommand(name, name + std::string(" mode"));
        sub->fallthrough();  // let --config etc. reach the parent parser
        sub->callback([&mode, name] { mode = cubic::cli::mode_from_string(name); });
    }

    CLI11_PARSE(app, argc, argv);

    if (config_path.empty()) {
        std::fprintf(stderr, "error: --config is required\n");
        return cubic::cli::kExitError;
    }
    if (seed_opt->count()) seed = seed_opt->as<std::uint64_t>();
    if (tol_opt->count()) tol = tol_opt->as<double>();

    try {
        cubic::cli::RunConfig config = cubic::cli::parse_config(config_path, mode);
        cubic::cli::Overrides overrides;
        if (!out_dir.empty()) overrides.out = out_dir;
        overrides.seed = seed;
        overrides.tol = tol;
        cubic::cli::apply_overrides(config, overrides);
        return cubic::cli::run(config);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return cubic::cli::kExitError;
    }
}
