#include "cubicproc/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cubic::io {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

json parse(const std::filesystem::path& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void expect_kind(const json& j, const std::string& kind, const std::filesystem::path& path) {
    if (!j.contains("kind") || j.at("kind").get<std::string>() != kind)
        throw std::runtime_error(path.string() + ": expected kind \"" + kind + "\"");
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

void save_tensor(const CubicTensor& t, const std::filesystem::path& path) {
    json j;
    j["kind"] = "cubic_tensor";
    j["n"] = t.size();
    j["entries"] = t.entries();
    write_file(path, j.dump(2) + "\n");
}

CubicTensor load_tensor(const std::filesystem::path& path, double tol) {
    const json j = parse(path);
    expect_kind(j, "cubic_tensor", path);
    return CubicTensor::validated(j.at("n").get<int>(),
                                  j.at("entries").get<std::vector<double>>(), tol);
}

void save_generator(const GeneratorTensor& a, const std::filesystem::path& path) {
    json j;
    j["kind"] = "generator_tensor";
    j["n"] = a.n;
    j["time"] = a.time;
    j["entries"] = a.entries;
    j["estimated_error"] = a.estimated_error;
    write_file(path, j.dump(2) + "\n");
}

GeneratorTensor load_generator(const std::filesystem::path& path) {
    const json j = parse(path);
    expect_kind(j, "generator_tensor", path);
    GeneratorTensor a;
    a.n = j.at("n").get<int>();
    a.time = j.at("time").get<double>();
    a.entries = j.at("entries").get<std::vector<double>>();
    a.estimated_error = j.at("estimated_error").get<std::vector<double>>();
    const std::size_t expected = static_cast<std::size_t>(a.n) * a.n * a.n * a.n;
    if (a.entries.size() != expected || a.estimated_error.size() != expected)
        throw std::runtime_error(path.string() + ": generator entry count mismatch");
    return a;
}

void save_distribution(const SimplexVector& x, const std::filesystem::path& path) {
    json j;
    j["kind"] = "distribution";
    j["n"] = x.size();
    j["probs"] = x.probs();
    write_file(path, j.dump(2) + "\n");
}

SimplexVector load_distribution(const std::filesystem::path& path, double tol) {
    const json j = parse(path);
    expect_kind(j, "distribution", path);
    auto probs = j.at("probs").get<std::vector<double>>();
    if (j.at("n").get<int>() != static_cast<int>(probs.size()))
        throw std::runtime_error(path.string() + ": n does not match probs length");
    return SimplexVector::validated(std::move(probs), tol);
}

namespace {

std::string csv_header(int n) {
    std::string header = "time";
    for (int i = 0; i < n; ++i) header += ",x" + std::to_string(i);
    return header + "\n";
}

}  // namespace

void save_states_csv(const std::vector<double>& times, const std::vector<SimplexVector>& states,
                     const std::filesystem::path& path) {
    if (times.size() != states.size())
        throw std::invalid_argument("save_states_csv: times/states size mismatch");
    if (states.empty()) throw std::invalid_argument("save_states_csv: empty trajectory");
    std::string text = csv_header(states.front().size());
    for (std::size_t r = 0; r < times.size(); ++r) {
        text += format_double(times[r]);
        for (int i = 0; i < states[r].size(); ++i) text += "," + format_double(states[r][i]);
        text += "\n";
    }
    write_file(path, text);
}

void save_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
    std::vector<double> times(traj.states.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        times[i] = static_cast<double>(traj.start_time) + static_cast<double>(i);
    save_states_csv(times, traj.states, path);
}

void save_dde_csv(const DdeSolution& sol, const std::filesystem::path& path) {
    std::string text = csv_header(static_cast<int>(sol.dim));
    for (std::size_t r = 0; r < sol.times.size(); ++r) {
        text += format_double(sol.times[r]);
        for (double v : sol.values[r]) text += "," + format_double(v);
        text += "\n";
    }
    write_file(path, text);
}

void save_measure_csv(const MeasureGrid& m, const std::filesystem::path& path) {
    std::string text = "node,weight,density\n";
    for (std::size_t i = 0; i < m.nodes.size(); ++i)
        text += format_double(m.nodes[i]) + "," + format_double(m.weights[i]) + "," +
                format_double(m.density[i]) + "\n";
    write_file(path, text);
}

void save_report(const Report& report, const std::filesystem::path& path) {
    write_file(path, to_json_string(report));
}

Report load_report(const std::filesystem::path& path) {
    return report_from_json_string(read_file(path));
}

}  // namespace cubic::io
