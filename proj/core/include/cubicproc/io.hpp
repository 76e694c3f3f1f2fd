#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cubicproc/cubic_tensor.hpp"
#include "cubicproc/dde.hpp"
#include "cubicproc/evolve.hpp"
#include "cubicproc/generator.hpp"
#include "cubicproc/kernel.hpp"
#include "cubicproc/report.hpp"
#include "cubicproc/simplex.hpp"

namespace cubic::io {

// All numbers use shortest round-trip decimal formatting, so a written value
// re-reads bit-identically. Indices in every file format are 0-based.
//
// Tensor files are JSON objects {"kind", "n", "entries"} with the entries
// flat in row-major (i,j,k,l) order; generator tensors add "time" and
// "estimated_error"; distributions are {"kind", "n", "probs"}.

void save_tensor(const CubicTensor& t, const std::filesystem::path& path);
CubicTensor load_tensor(const std::filesystem::path& path, double tol = kDefaultTol);

void save_generator(const GeneratorTensor& a, const std::filesystem::path& path);
GeneratorTensor load_generator(const std::filesystem::path& path);

void save_distribution(const SimplexVector& x, const std::filesystem::path& path);
SimplexVector load_distribution(const std::filesystem::path& path, double tol = kDefaultTol);

// CSV: header "time,x0,..,x{n-1}", one row per state.
void save_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);
void save_states_csv(const std::vector<double>& times,
                     const std::vector<SimplexVector>& states,
                     const std::filesystem::path& path);
void save_dde_csv(const DdeSolution& sol, const std::filesystem::path& path);

// CSV: header "node,weight,density".
void save_measure_csv(const MeasureGrid& m, const std::filesystem::path& path);

void save_report(const Report& report, const std::filesystem::path& path);
Report load_report(const std::filesystem::path& path);

std::string format_double(double v);  // shortest round-trip decimal

}  // namespace cubic::io
