#include "cubicproc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cubicproc/cdf.hpp"
#include "cubicproc/closed_form.hpp"
#include "cubicproc/cubic_tensor.hpp"
#include "cubicproc/dde.hpp"
#include "cubicproc/evolve.hpp"
#include "cubicproc/generator.hpp"
#include "cubicproc/io.hpp"
#include "cubicproc/kernel.hpp"
#include "cubicproc/moments.hpp"
#include "cubicproc/monte_carlo.hpp"
#include "cubicproc/report.hpp"
#include "cubicproc/transition_family.hpp"

namespace cubic::cli {

using nlohmann::json;

namespace {

const char* kModeNames[] = {"evolve",    "sample", "compose",   "verify",        "generator",
                            "dde",       "kernel-ck", "kernel-coeffs", "kernel-residual"};

std::string joined_mode_names() {
    std::string out;
    for (const auto& name : mode_names()) {
        if (!out.empty()) out += ", ";
        out += name;
    }
    return out;
}

double require_finite(double v, const std::string& field) {
    if (!std::isfinite(v)) throw ConfigError(field, "must be a finite number");
    return v;
}

double get_number(const json& j, const std::string& field) {
    if (!j.contains(field)) throw ConfigError(field, "missing required field");
    if (!j.at(field).is_number()) throw ConfigError(field, "must be a number");
    return require_finite(j.at(field).get<double>(), field);
}

double get_number_or(const json& j, const std::string& field, double fallback) {
    if (!j.contains(field)) return fallback;
    if (!j.at(field).is_number()) throw ConfigError(field, "must be a number");
    return require_finite(j.at(field).get<double>(), field);
}

long get_integer(const json& j, const std::string& field) {
    if (!j.contains(field)) throw ConfigError(field, "missing required field");
    if (!j.at(field).is_number_integer()) throw ConfigError(field, "must be an integer");
    return j.at(field).get<long>();
}

long get_integer_or(const json& j, const std::string& field, long fallback) {
    if (!j.contains(field)) return fallback;
    if (!j.at(field).is_number_integer()) throw ConfigError(field, "must be an integer");
    return j.at(field).get<long>();
}

std::string get_string(const json& j, const std::string& field) {
    if (!j.contains(field)) throw ConfigError(field, "missing required field");
    if (!j.at(field).is_string()) throw ConfigError(field, "must be a string");
    return j.at(field).get<std::string>();
}

std::vector<double> get_deltas(const json& j, const std::string& field) {
    if (!j.contains(field)) return default_deltas();
    if (!j.at(field).is_array()) throw ConfigError(field, "must be an array of numbers");
    auto deltas = j.at(field).get<std::vector<double>>();
    if (deltas.size() < 2) throw ConfigError(field, "need at least 2 deltas");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        require_finite(deltas[i], field);
        if (!(deltas[i] > 0.0)) throw ConfigError(field, "deltas must be positive");
        if (i > 0 && !(deltas[i] < deltas[i - 1]))
            throw ConfigError(field, "deltas must be decreasing");
    }
    return deltas;
}

std::filesystem::path resolve(const RunConfig& cfg, const std::string& rel) {
    std::filesystem::path p(rel);
    return p.is_absolute() ? p : cfg.config_dir / p;
}

SimplexVector read_x0(const RunConfig& cfg, const json& j, double tol) {
    if (!j.contains("x0")) throw ConfigError("x0", "missing required field");
    const json& v = j.at("x0");
    try {
        if (v.is_array()) return SimplexVector::validated(v.get<std::vector<double>>(), tol);
        if (v.is_string()) return io::load_distribution(resolve(cfg, v.get<std::string>()), tol);
    } catch (const std::exception& e) {
        throw ConfigError("x0", e.what());
    }
    throw ConfigError("x0", "must be an inline array or a file path");
}

CubicTensor read_tensor(const RunConfig& cfg, const json& j, double tol) {
    if (!j.contains("tensor")) throw ConfigError("tensor", "missing required field");
    const json& v = j.at("tensor");
    try {
        if (v.is_string()) return io::load_tensor(resolve(cfg, v.get<std::string>()), tol);
        if (v.is_object()) {
            if (get_string(v, "kind") == "uniform")
                return CubicTensor::uniform(static_cast<int>(get_integer(v, "n")));
            return CubicTensor::validated(static_cast<int>(get_integer(v, "n")),
                                          v.at("entries").get<std::vector<double>>(), tol);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("tensor", e.what());
    }
    throw ConfigError("tensor", "must be a file path or an inline tensor object");
}

ClosedFormFamily read_family(const json& j) {
    if (!j.contains("family")) throw ConfigError("family", "missing required field");
    const json& v = j.at("family");
    if (!v.is_object()) throw ConfigError("family", "must be an object with a kind");
    const std::string kind = get_string(v, "kind");
    if (kind == "example1") {
        const double eps = get_number(v, "epsilon");
        if (!(eps >= 0.0 && eps <= 0.5))
            throw ConfigError("family.epsilon", "must lie in [0, 1/2]");
        return example1_family(eps);
    }
    if (kind == "uniform") {
        const long n = get_integer(v, "n");
        if (n < 2) throw ConfigError("family.n", "must be >= 2");
        return uniform_family(static_cast<int>(n));
    }
    throw ConfigError("family.kind", "unknown family \"" + kind +
                                         "\"; valid kinds: example1, uniform");
}

Kernel read_kernel(const json& j) {
    if (!j.contains("kernel")) return example2_kernel();
    const json& v = j.at("kernel");
    if (!v.is_object()) throw ConfigError("kernel", "must be an object with a kind");
    const std::string kind = get_string(v, "kind");
    if (kind != "example2")
        throw ConfigError("kernel.kind", "unknown kernel \"" + kind + "\"; valid kinds: example2");
    bool squared = true;
    if (v.contains("squared_exponent")) {
        if (!v.at("squared_exponent").is_boolean())
            throw ConfigError("kernel.squared_exponent", "must be a boolean");
        squared = v.at("squared_exponent").get<bool>();
    }
    return example2_kernel(squared);
}

GridSpec read_grid(const json& j) {
    GridSpec spec;
    if (!j.contains("grid")) return spec;
    const json& v = j.at("grid");
    spec.lo = get_number_or(v, "lo", spec.lo);
    spec.hi = get_number_or(v, "hi", spec.hi);
    spec.panels = static_cast<int>(get_integer_or(v, "panels", spec.panels));
    spec.points_per_panel =
        static_cast<int>(get_integer_or(v, "points_per_panel", spec.points_per_panel));
    if (!(spec.lo < spec.hi)) throw ConfigError("grid", "need lo < hi");
    if (spec.panels < 1 || spec.points_per_panel < 1)
        throw ConfigError("grid", "panels and points_per_panel must be >= 1");
    return spec;
}

MeasureGrid read_m0(const json& j, const GridSpec& spec) {
    if (!j.contains("m0")) return point_mass_measure(0.0);
    const json& v = j.at("m0");
    const std::string kind = get_string(v, "kind");
    if (kind == "point") return point_mass_measure(get_number_or(v, "at", 0.0));
    if (kind == "gaussian") {
        const double var = get_number(v, "variance");
        if (!(var > 0.0)) throw ConfigError("m0.variance", "must be > 0");
        return gaussian_measure(get_number_or(v, "mean", 0.0), var, make_rule(spec));
    }
    throw ConfigError("m0.kind", "unknown measure \"" + kind + "\"; valid kinds: point, gaussian");
}

std::vector<std::array<double, 4>> read_probes4(const json& j, const std::string& field,
                                                std::vector<std::array<double, 4>> fallback) {
    if (!j.contains(field)) return fallback;
    const json& v = j.at(field);
    if (!v.is_array()) throw ConfigError(field, "must be an array of [x,y,z,w] probes");
    std::vector<std::array<double, 4>> probes;
    for (const auto& row : v) {
        if (!row.is_array() || row.size() != 4)
            throw ConfigError(field, "each probe must be [x,y,z,w]");
        probes.push_back({require_finite(row[0].get<double>(), field),
                          require_finite(row[1].get<double>(), field),
                          require_finite(row[2].get<double>(), field),
                          require_finite(row[3].get<double>(), field)});
    }
    if (probes.empty()) throw ConfigError(field, "must not be empty");
    return probes;
}

// --- mode runners -------------------------------------------------------

int finish(const RunConfig& cfg, Report& report) {
    std::filesystem::create_directories(cfg.out_dir);
    io::save_report(report, cfg.out_dir / "report.json");
    return report.all_pass() ? kExitOk : kExitCheckFailed;
}

int run_evolve(const RunConfig& cfg, const json& j, Report& report) {
    const CubicTensor tensor = read_tensor(cfg, j, cfg.tol);
    const SimplexVector x0 = read_x0(cfg, j, cfg.tol);
    const long horizon = get_integer(j, "horizon");
    if (horizon < 0) throw ConfigError("horizon", "must be >= 0");
    if (tensor.size() != x0.size()) throw ConfigError("x0", "dimension differs from tensor");

    Trajectory traj = iterate(tensor, x0, static_cast<int>(horizon));
    double worst_defect = 0.0, worst_negative = 0.0;
    for (const auto& state : traj.states) {
        worst_defect = std::max(worst_defect, state.mass_defect());
        worst_negative = std::max(worst_negative, std::max(0.0, -state.min_entry()));
    }
    std::filesystem::create_directories(cfg.out_dir);
    io::save_trajectory_csv(traj, cfg.out_dir / "trajectory.csv");
    report.add("simplex_mass_defect", worst_defect, cfg.tol);
    report.add("simplex_negativity", worst_negative, cfg.tol);
    return finish(cfg, report);
}

int run_sample(const RunConfig& cfg, const json& j, Report& report) {
    const CubicTensor tensor = read_tensor(cfg, j, cfg.tol);
    const SimplexVector x0 = read_x0(cfg, j, cfg.tol);
    const long horizon = get_integer(j, "horizon");
    if (horizon < 0) throw ConfigError("horizon", "must be >= 0");
    const long population = get_integer(j, "population");
    if (population < 1) throw ConfigError("population", "must be >= 1");

    const auto empirical =
        monte_carlo_trajectory(tensor, x0, static_cast<int>(horizon), population, cfg.seed);
    const Trajectory expected = iterate(tensor, x0, static_cast<int>(horizon));

    // Normalized deviation against the per-component binomial 3-sigma band.
    double worst = 0.0;
    for (std::size_t g = 1; g < empirical.size(); ++g)
        for (int i = 0; i < x0.size(); ++i) {
            const double p = expected.states[g][i];
            const double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-12) / population);
            worst = std::max(worst, std::abs(empirical[g][i] - p) / (3.0 * sigma));
        }

    std::filesystem::create_directories(cfg.out_dir);
    std::vector<double> times(empirical.size());
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = static_cast<double>(i);
    io::save_states_csv(times, empirical, cfg.out_dir / "samples.csv");
    io::save_trajectory_csv(expected, cfg.out_dir / "deterministic.csv");
    auto& check = report.add("monte_carlo_3sigma", worst, 1.0);
    check.metadata["population"] = static_cast<double>(population);
    check.metadata["generations"] = static_cast<double>(horizon);
    return finish(cfg, report);
}

int run_compose(const RunConfig& cfg, const json& j, Report& report) {
    const CubicTensor tensor = read_tensor(cfg, j, cfg.tol);
    const SimplexVector x0 = read_x0(cfg, j, cfg.tol);
    const long s = get_integer(j, "s");
    const long t = get_integer(j, "t");
    if (s < 0) throw ConfigError("s", "must be >= 0");
    if (t <= s) throw ConfigError("t", "must be > s");

    TransitionFamily family(tensor, x0, std::max<long>(16, t - s));
    const CubicTensor& composed = family.transition(static_cast<int>(s), static_cast<int>(t));
    std::filesystem::create_directories(cfg.out_dir);
    io::save_tensor(composed, cfg.out_dir / "composed_tensor.json");

    TensorReport tensor_report = validate_tensor(composed, cfg.tol);
    const double tensor_stat = std::max({tensor_report.worst_negativity,
                                         tensor_report.worst_row_defect,
                                         tensor_report.worst_symmetry_defect});
    report.add("composed_tensor_valid", tensor_stat, cfg.tol);

    double worst_split = 0.0;
    for (long tau = s + 1; tau < t; ++tau)
        worst_split = std::max(worst_split, fundamental_residual(family, static_cast<int>(s),
                                                                 static_cast<int>(tau),
                                                                 static_cast<int>(t)));
    auto& check = report.add("fundamental_residual_max", worst_split, 1e-10);
    check.metadata["splits"] = static_cast<double>(std::max<long>(0, t - s - 1));
    return finish(cfg, report);
}

int run_verify(const RunConfig& cfg, const json& j, Report& report) {
    const ClosedFormFamily family = read_family(j);
    const SimplexVector x0 = read_x0(cfg, j, cfg.tol);
    if (x0.size() != family.n) throw ConfigError("x0", "dimension differs from family");
    const long s_max = get_integer_or(j, "s_max", 2);
    const long t_max = get_integer_or(j, "t_max", 5);
    if (s_max < 0) throw ConfigError("s_max", "must be >= 0");
    if (t_max < s_max + 2) throw ConfigError("t_max", "must be >= s_max + 2");

    const ConditionReport conditions = verify_conditions(family, x0, static_cast<int>(s_max),
                                                         static_cast<int>(t_max), cfg.tol);
    for (const auto& c : conditions.checks) {
        auto& check = report.add("condition_" + c.name, c.statistic, c.tolerance);
        check.pass = c.pass;
        check.metadata = c.metadata;
        if (c.vacuous) check.note = c.worst.empty() ? "vacuous" : c.worst;
        else if (!c.worst.empty() && !c.pass) check.note = "worst at " + c.worst;
    }
    return finish(cfg, report);
}

int run_generator(const RunConfig& cfg, const json& j, Report& report) {
    const ClosedFormFamily family = read_family(j);
    const SimplexVector x0 = read_x0(cfg, j, cfg.tol);
    if (x0.size() != family.n) throw ConfigError("x0", "dimension differs from family");
    const double time = get_number_or(j, "time", 1.0);
    if (time < 1.0) throw ConfigError("time", "must be >= 1");
    const auto deltas = get_deltas(j, "deltas");

    const GeneratorTensor gen = estimate_generator(family, time, x0, deltas);
    std::filesystem::create_directories(cfg.out_dir);
    io::save_generator(gen, cfg.out_dir / "generator.json");

    auto& rows = report.add("generator_row_sum_defect", generator_row_sum_defect(gen), 1e-8);
    rows.metadata["max_extrapolation_error"] = generator_max_error(gen);
    report.add("generator_symmetry_defect", generator_symmetry_defect(gen), 1e-8);
    return finish(cfg, report);
}

int run_dde(const RunConfig& cfg, const json& j, Report& report) {
    const ClosedFormFamily family = read_family(j);
    const SimplexVector x0 = read_x0(cfg, j, cfg.tol);
    if (x0.size() != family.n) throw ConfigError("x0", "dimension differs from family");
    const std::string equation = j.contains("equation") ? get_string(j, "equation") : "distribution";
    const double t_end = get_number(j, "t_end");
    const auto deltas = get_deltas(j, "deltas");
    const double h = cfg.h;

    std::filesystem::create_directories(cfg.out_dir);
    if (equation == "distribution") {
        if (!(t_end > 1.0)) throw ConfigError("t_end", "must be > 1");
        auto a = [&](double t) { return estimate_generator(family, t, x0, deltas); };
        auto history = [&x0](double) { return x0; };
        const DdeSolution sol = integrate_distribution_dde(a, history, 1.0, t_end, h);
        const DdeSolution finer = integrate_distribution_dde(a, history, 1.0, t_end, h / 2.0);
        double self_conv = 0.0;
        for (std::size_t i = 0; i < sol.times.size(); ++i)
            for (std::size_t d = 0; d < sol.dim; ++d)
                self_conv = std::max(self_conv,
                                     std::abs(sol.values[i][d] - finer.values[2 * i][d]));
        io::save_dde_csv(sol, cfg.out_dir / "dde_solution.csv");
        report.add("dde_mass_drift", sol.mass_drift(), 1e-10);
        report.add("dde_self_convergence", self_conv, 1e-8);
        return finish(cfg, report);
    }
    if (equation == "transition") {
        const long s = get_integer_or(j, "s", 0);
        if (s < 0) throw ConfigError("s", "must be >= 0");
        if (!(t_end >= s + 2.0)) throw ConfigError("t_end", "must be >= s + 2");
        const DdeSolution sol = integrate_forward_transition_dde(family, x0,
                                                                 static_cast<int>(s), t_end, h,
                                                                 deltas);
        const CubicTensor final_tensor(family.n, sol.values.back());
        io::save_tensor(final_tensor, cfg.out_dir / "transition_final.json");
        const TensorReport tr = validate_tensor(final_tensor, cfg.tol);
        report.add("transition_row_defect", tr.worst_row_defect, 1e-9);

        const CubicTensor closed = family.tensor(static_cast<double>(s), t_end, x0);
        double dev = 0.0;
        for (std::size_t r = 0; r < closed.entries().size(); ++r)
            dev = std::max(dev, std::abs(closed.entries()[r] - sol.values.back()[r]));
        report.add("transition_vs_closed_form", dev, 1e-6);
        return finish(cfg, report);
    }
    throw ConfigError("equation", "unknown equation \"" + equation +
                                      "\"; valid: distribution, transition");
}

int run_kernel_ck(const RunConfig& cfg, const json& j, Report& report) {
    const Kernel kernel = read_kernel(j);
    const GridSpec grid = read_grid(j);
    const double s = get_number_or(j, "s", 0.0);
    const double tau = get_number_or(j, "tau", 1.0);
    const double t = get_number_or(j, "t", 2.0);
    if (tau - s < 1.0) throw ConfigError("tau", "need tau - s >= 1");
    if (t - tau < 1.0) throw ConfigError("t", "need t - tau >= 1");

    // The intermediate measure either evolves from m0 (the default) or is a
    // point mass placed directly at tau; only the latter admits the simple
    // closed-form variance-gap expectation.
    bool point_m_tau = false;
    MeasureGrid m_tau;
    {
        std::string mkind = "evolve";
        double at = 0.0;
        if (j.contains("m_tau")) {
            const json& v = j.at("m_tau");
            mkind = get_string(v, "kind");
            at = get_number_or(v, "at", 0.0);
        }
        if (mkind == "point") {
            m_tau = point_mass_measure(at, tau);
            point_m_tau = true;
        } else if (mkind == "evolve") {
            MeasureProvider measures(kernel, read_m0(j, grid), grid);
            m_tau = measures(tau);
        } else {
            throw ConfigError("m_tau.kind", "unknown \"" + mkind + "\"; valid: point, evolve");
        }
    }

    const auto probes = read_probes4(j, "probes",
                                     {{0.0, 0.0, 0.0, 0.0},
                                      {1.0, -1.0, 0.5, 0.5},
                                      {0.5, 0.5, 0.5, 2.0}});
    const CkResidual ck = ck_residual_density(kernel, m_tau, s, tau, t, probes);
    auto& trunc = report.add("ck_truncation_defect", ck.truncation_defect, 0.01);
    trunc.metadata["ck_max_residual"] = ck.max_residual;

    const VarianceGap gap = ck_variance_gap(kernel, m_tau, s, tau, t,
                                            {probes[0][0], probes[0][1], probes[0][2]});
    if (point_m_tau) {
        auto& gap_check = report.add("ck_variance_gap_error",
                                     std::abs(gap.gap - (std::exp2(tau + 1.0) - 1.0) / 2.0), 1e-6);
        gap_check.metadata["variance_gap"] = gap.gap;
        gap_check.metadata["lhs_variance"] = gap.lhs_variance;
        gap_check.metadata["rhs_variance"] = gap.rhs_variance;
    } else {
        trunc.metadata["variance_gap"] = gap.gap;
        trunc.metadata["lhs_variance"] = gap.lhs_variance;
        trunc.metadata["rhs_variance"] = gap.rhs_variance;
    }

    std::filesystem::create_directories(cfg.out_dir);
    io::save_measure_csv(m_tau, cfg.out_dir / "measure_tau.csv");
    return finish(cfg, report);
}

int run_kernel_coeffs(const RunConfig& cfg, const json& j, Report& report) {
    const Kernel kernel = read_kernel(j);
    const GridSpec grid = read_grid(j);
    const double s = get_number_or(j, "s", 0.0);
    const double t = get_number_or(j, "t", s + 2.5);
    if (!(t >= s + 2.0)) throw ConfigError("t", "need t >= s + 2");
    const double w = get_number_or(j, "w", 0.0);
    const auto deltas = get_deltas(j, "deltas");
    std::array<double, 3> probe{0.0, 0.0, 0.0};
    if (j.contains("probe")) {
        const json& v = j.at("probe");
        if (!v.is_array() || v.size() != 3) throw ConfigError("probe", "must be [x,y,z]");
        for (int i = 0; i < 3; ++i) probe[i] = require_finite(v[i].get<double>(), "probe");
    }

    MeasureProvider measures(kernel, read_m0(j, grid), grid);
    const MomentCoefficients c = moment_coefficients(
        kernel, [&](double time) -> const MeasureGrid& { return measures(time); }, s, probe, t, w,
        deltas);

    const double negative_second_moment =
        std::max(0.0, -std::min(c.B2.value, c.B2tilde.value));
    auto& check = report.add("second_moment_nonnegative", negative_second_moment, cfg.tol);
    check.metadata["A"] = c.A.value;
    check.metadata["A_error"] = c.A.error;
    check.metadata["B2"] = c.B2.value;
    check.metadata["B2_error"] = c.B2.error;
    check.metadata["D_y"] = c.D_y.value;
    check.metadata["D_z"] = c.D_z.value;
    check.metadata["D2_y"] = c.D2_y.value;
    check.metadata["D2_y_converged"] = c.D2_y.converged ? 1.0 : 0.0;
    check.metadata["D2_z"] = c.D2_z.value;
    check.metadata["D2_z_converged"] = c.D2_z.converged ? 1.0 : 0.0;
    check.metadata["Ntilde"] = c.Ntilde.value;
    check.metadata["Atilde"] = c.Atilde.value;
    check.metadata["B2tilde"] = c.B2tilde.value;
    check.metadata["third_moment_rate"] = c.third_moment_rate.value;
    return finish(cfg, report);
}

int run_kernel_residual(const RunConfig& cfg, const json& j, Report& report) {
    const Kernel kernel = read_kernel(j);
    const GridSpec grid = read_grid(j);
    const std::string equation = get_string(j, "equation");
    const double s = get_number_or(j, "s", 0.0);
    const double t = get_number_or(j, "t", s + 2.5);
    const double fd_delta = get_number_or(j, "fd_delta", 1e-2);
    if (!(fd_delta > 0.0)) throw ConfigError("fd_delta", "must be > 0");
    const auto deltas = get_deltas(j, "deltas");

    MeasureProvider measures(kernel, read_m0(j, grid), grid);
    auto measure_at = [&](double time) -> const MeasureGrid& { return measures(time); };

    double residual = 0.0;
    double min_ratio = 0.0;
    if (equation == "forward-integro" || equation == "backward-integro") {
        const auto probes = read_probes4(j, "probes", {{0.0, 0.0, 0.0, 0.0},
                                                       {0.5, -0.5, 1.0, 0.5}});
        const auto dir = equation == "forward-integro" ? IntegroDirection::Forward
                                                       : IntegroDirection::Backward;
        const IntegroResidual r =
            integro_residual(kernel, measure_at, dir, s, t, probes, fd_delta, deltas);
        residual = r.max_residual;
        min_ratio = r.min_convergence_ratio;
    } else if (equation == "backward-pde" || equation == "forward-displaced") {
        std::vector<std::array<double, 6>> probes{{s, 0.0, 0.0, 0.0, t, 0.0},
                                                  {s, 0.5, -0.5, 1.0, t, 0.5}};
        const auto form = equation == "backward-pde" ? ReducedForm::BackwardPdePrinted
                                                     : ReducedForm::ForwardDisplaced;
        const ReducedResidual r =
            reduced_equation_residual(kernel, measure_at, form, probes, fd_delta, 0.1, deltas);
        residual = r.max_residual;
        min_ratio = r.min_convergence_ratio;
        if (equation == "backward-pde") {
            const ReducedResidual rc = reduced_equation_residual(
                kernel, measure_at, ReducedForm::BackwardPdeConsistent, probes, fd_delta, 0.1,
                deltas);
            auto& check = report.add("residual_consistent_variant",
                                     std::max(0.0, kConvergenceRatioFloor -
                                                       rc.min_convergence_ratio), 0.0);
            check.metadata["residual"] = rc.max_residual;
            check.metadata["convergence_ratio"] = rc.min_convergence_ratio;
        }
    } else {
        throw ConfigError("equation",
                          "unknown equation \"" + equation +
                              "\"; valid: forward-integro, backward-integro, backward-pde, "
                              "forward-displaced");
    }

    auto& check = report.add("residual_convergence_shortfall",
                             std::max(0.0, kConvergenceRatioFloor - min_ratio), 0.0);
    check.metadata["residual"] = residual;
    check.metadata["convergence_ratio"] = min_ratio;
    return finish(cfg, report);
}

}  // namespace

const std::vector<std::string>& mode_names() {
    static const std::vector<std::string> names(std::begin(kModeNames), std::end(kModeNames));
    return names;
}

std::string to_string(Mode mode) { return kModeNames[static_cast<int>(mode)]; }

std::optional<Mode> mode_from_string(const std::string& name) {
    const auto& names = mode_names();
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<Mode>(i);
    return std::nullopt;
}

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error("config field \"" + field + "\": " + message),
      field_(std::move(field)) {}

RunConfig parse_config(const std::filesystem::path& path, std::optional<Mode> mode_override) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path.string());
    json j;
    try {
        std::ostringstream buf;
        buf << in.rdbuf();
        j = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ConfigError("config", e.what());
    }
    if (!j.is_object()) throw ConfigError("config", "top level must be a JSON object");

    RunConfig cfg;
    cfg.config_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");

    std::optional<Mode> file_mode;
    if (j.contains("mode")) {
        const std::string name = get_string(j, "mode");
        file_mode = mode_from_string(name);
        if (!file_mode)
            throw ConfigError("mode",
                              "unknown mode \"" + name + "\"; valid modes: " + joined_mode_names());
    }
    if (mode_override && file_mode && *mode_override != *file_mode)
        throw ConfigError("mode", "config says \"" + to_string(*file_mode) +
                                      "\" but the subcommand is \"" +
                                      to_string(*mode_override) + "\"");
    if (!mode_override && !file_mode)
        throw ConfigError("mode", "missing; valid modes: " + joined_mode_names());
    cfg.mode = mode_override ? *mode_override : *file_mode;

    if (j.contains("out")) cfg.out_dir = resolve(cfg, get_string(j, "out"));
    cfg.seed = static_cast<std::uint64_t>(get_integer_or(j, "seed", 0));
    cfg.tol = get_number_or(j, "tol", 1e-9);
    if (!(cfg.tol > 0.0)) throw ConfigError("tol", "must be > 0");
    cfg.h = get_number_or(j, "h", 1.0 / 64.0);
    if (!(cfg.h > 0.0 && cfg.h <= 1.0)) throw ConfigError("h", "must lie in (0, 1]");
    cfg.raw = j.dump();
    return cfg;
}

void apply_overrides(RunConfig& config, const Overrides& overrides) {
    if (overrides.out) config.out_dir = *overrides.out;
    if (overrides.seed) config.seed = *overrides.seed;
    if (overrides.tol) {
        if (!(*overrides.tol > 0.0)) throw ConfigError("tol", "must be > 0");
        config.tol = *overrides.tol;
    }
}

int run(const RunConfig& config) {
    const json j = json::parse(config.raw);
    Report report;
    report.mode = to_string(config.mode);
    report.seed = config.seed;
    switch (config.mode) {
        case Mode::Evolve: return run_evolve(config, j, report);
        case Mode::Sample: return run_sample(config, j, report);
        case Mode::Compose: return run_compose(config, j, report);
        case Mode::Verify: return run_verify(config, j, report);
        case Mode::Generator: return run_generator(config, j, report);
        case Mode::Dde: return run_dde(config, j, report);
        case Mode::KernelCk: return run_kernel_ck(config, j, report);
        case Mode::KernelCoeffs: return run_kernel_coeffs(config, j, report);
        case Mode::KernelResidual: return run_kernel_residual(config, j, report);
    }
    throw std::logic_error("unreachable mode");
}

}  // namespace cubic::cli
