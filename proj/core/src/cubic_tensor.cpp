#include "cubicproc/cubic_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cubic {

namespace {

constexpr std::size_t kMaxListedViolations = 100;

// The six permutations of a parent triple.
constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

}  // namespace

CubicTensor::CubicTensor(int n, std::vector<double> entries) : n_(n), entries_(std::move(entries)) {
    if (n < 2) throw std::invalid_argument("CubicTensor: n must be >= 2");
    std::size_t expected = 1;
    for (int r = 0; r < 4; ++r) expected *= static_cast<std::size_t>(n);
    if (entries_.size() != expected)
        throw std::invalid_argument("CubicTensor: expected " + std::to_string(expected) +
                                    " entries, got " + std::to_string(entries_.size()));
}

CubicTensor CubicTensor::validated(int n, std::vector<double> entries, double tol) {
    CubicTensor t(n, std::move(entries));
    for (std::size_t i = 0; i < t.entries_.size(); ++i) {
        double v = t.entries_[i];
        if (!std::isfinite(v))
            throw std::invalid_argument("CubicTensor: non-finite entry at flat index " +
                                        std::to_string(i));
        if (v < -tol)
            throw std::invalid_argument("CubicTensor: entry at flat index " + std::to_string(i) +
                                        " is " + std::to_string(v) + ", below -tol");
        if (v < 0.0) t.entries_[i] = 0.0;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double sum = 0.0;
                for (int l = 0; l < n; ++l) sum += t(i, j, k, l);
                if (std::abs(sum - 1.0) > tol)
                    throw std::invalid_argument(
                        "CubicTensor: row (" + std::to_string(i) + "," + std::to_string(j) + "," +
                        std::to_string(k) + ") has mass defect " + std::to_string(sum - 1.0));
                // leave rounding-level defects alone (file round-trip stays
                // bit-identical), renormalize anything larger
                if (std::abs(sum - 1.0) > 1e-14 && sum > 0.0)
                    for (int l = 0; l < n; ++l) t.at(i, j, k, l) /= sum;
            }
    return t;
}

CubicTensor CubicTensor::uniform(int n) {
    if (n < 2) throw std::invalid_argument("CubicTensor::uniform: n must be >= 2");
    std::size_t count = 1;
    for (int r = 0; r < 4; ++r) count *= static_cast<std::size_t>(n);
    return CubicTensor(n, std::vector<double>(count, 1.0 / n));
}

TensorReport validate_tensor(const CubicTensor& t, double tol) {
    TensorReport report;
    const int n = t.size();
    auto record = [&](TensorDefect kind, std::array<int, 4> where, double magnitude) {
        ++report.total_violations;
        if (report.violations.size() < kMaxListedViolations)
            report.violations.push_back({kind, where, magnitude});
    };

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double sum = 0.0;
                for (int l = 0; l < n; ++l) {
                    double v = t(i, j, k, l);
                    sum += v;
                    if (v < -tol) {
                        record(TensorDefect::Nonnegativity, {i, j, k, l}, -v);
                        report.worst_negativity = std::max(report.worst_negativity, -v);
                    }
                }
                double defect = std::abs(sum - 1.0);
                if (defect > tol) {
                    record(TensorDefect::Normalization, {i, j, k, -1}, defect);
                    report.worst_row_defect = std::max(report.worst_row_defect, defect);
                }
            }

    // Compare i <= j <= k representatives against their permutations.
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) {
                const int idx[3] = {i, j, k};
                for (int l = 0; l < n; ++l) {
                    double ref = t(i, j, k, l);
                    double worst = 0.0;
                    for (const auto& p : kPerms)
                        worst = std::max(worst,
                                         std::abs(t(idx[p[0]], idx[p[1]], idx[p[2]], l) - ref));
                    if (worst > tol) {
                        record(TensorDefect::Symmetry, {i, j, k, l}, worst);
                        report.worst_symmetry_defect =
                            std::max(report.worst_symmetry_defect, worst);
                    }
                }
            }
    return report;
}

CubicTensor symmetrize_tensor(const CubicTensor& t) {
    const int n = t.size();
    CubicTensor out = t;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) {
                const int idx[3] = {i, j, k};
                for (int l = 0; l < n; ++l) {
                    // Mean as reference + average deviation: exactly the
                    // identity when the six permuted entries already agree.
                    const double ref = t(i, j, k, l);
                    double correction = 0.0;
                    for (const auto& p : kPerms)
                        correction += t(idx[p[0]], idx[p[1]], idx[p[2]], l) - ref;
                    const double mean = ref + correction / 6.0;
                    for (const auto& p : kPerms)
                        out.at(idx[p[0]], idx[p[1]], idx[p[2]], l) = mean;
                }
            }
    return out;
}

std::string to_string(TensorDefect kind) {
    switch (kind) {
        case TensorDefect::Nonnegativity: return "nonnegativity";
        case TensorDefect::Normalization: return "normalization";
        case TensorDefect::Symmetry: return "symmetry";
    }
    return "unknown";
}

}  // namespace cubic
