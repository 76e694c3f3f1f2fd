#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "cubicproc/simplex.hpp"

namespace cubic {

/// Rank-4 transition law p(i,j,k,l) on {0,...,n-1}: the probability that the
/// interaction of parents i,j,k produces offspring l.
///
/// A valid law is entrywise nonnegative, row-normalized (sum over l equals 1
/// for every parent triple) and symmetric under all permutations of (i,j,k).
/// The plain constructor only checks the shape; `validate_tensor` measures
/// the invariants and `validated` applies the cleanup policy used when
/// loading from files.
class CubicTensor {
public:
    CubicTensor(int n, std::vector<double> entries);

    static CubicTensor validated(int n, std::vector<double> entries, double tol = kDefaultTol);
    static CubicTensor uniform(int n);

    int size() const { return n_; }
    std::size_t index(int i, int j, int k, int l) const {
        return ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
    }
    double operator()(int i, int j, int k, int l) const { return entries_[index(i, j, k, l)]; }
    double& at(int i, int j, int k, int l) { return entries_[index(i, j, k, l)]; }
    const std::vector<double>& entries() const { return entries_; }

private:
    int n_ = 0;
    std::vector<double> entries_;
};

enum class TensorDefect { Nonnegativity, Normalization, Symmetry };

struct TensorViolation {
    TensorDefect kind;
    std::array<int, 4> where;  // (i,j,k,l); l = -1 for per-row defects
    double magnitude;
};

struct TensorReport {
    std::vector<TensorViolation> violations;  // listing capped, counts exact
    std::size_t total_violations = 0;
    double worst_negativity = 0.0;      // most negative entry, as a magnitude
    double worst_row_defect = 0.0;      // max |row sum - 1|
    double worst_symmetry_defect = 0.0; // max |p(ijk,l) - p(perm(ijk),l)|

    bool passed() const { return total_violations == 0; }
};

TensorReport validate_tensor(const CubicTensor& t, double tol = kDefaultTol);

/// Averages each entry over the 6 permutations of the parent triple, the
/// projection onto exactly symmetric tensors. Row normalization is preserved.
CubicTensor symmetrize_tensor(const CubicTensor& t);

std::string to_string(TensorDefect kind);

}  // namespace cubic
