#include "cubicproc/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cubic {

SimplexVector SimplexVector::validated(std::vector<double> probs, double tol) {
    if (probs.size() < 2)
        throw std::invalid_argument("SimplexVector: need at least 2 states, got " +
                                    std::to_string(probs.size()));
    for (std::size_t i = 0; i < probs.size(); ++i) {
        double v = probs[i];
        if (!std::isfinite(v))
            throw std::invalid_argument("SimplexVector: non-finite entry at index " +
                                        std::to_string(i));
        if (v < -tol)
            throw std::invalid_argument("SimplexVector: entry " + std::to_string(i) + " is " +
                                        std::to_string(v) + ", below -tol");
        if (v < 0.0) probs[i] = 0.0;
    }
    double sum = 0.0;
    for (double v : probs) sum += v;
    if (std::abs(sum - 1.0) > tol)
        throw std::invalid_argument("SimplexVector: mass defect " + std::to_string(sum - 1.0) +
                                    " exceeds tol");
    // Rounding-level defects are left alone so that clean data round-trips
    // bit-identically through files.
    if (std::abs(sum - 1.0) > 1e-14 && sum > 0.0)
        for (double& v : probs) v /= sum;
    return SimplexVector(std::move(probs));
}

SimplexVector SimplexVector::unchecked(std::vector<double> probs) {
    return SimplexVector(std::move(probs));
}

SimplexVector SimplexVector::uniform(int n) {
    if (n < 2) throw std::invalid_argument("SimplexVector::uniform: n must be >= 2");
    return SimplexVector(std::vector<double>(n, 1.0 / n));
}

SimplexVector SimplexVector::point_mass(int n, int state) {
    if (n < 2) throw std::invalid_argument("SimplexVector::point_mass: n must be >= 2");
    if (state < 0 || state >= n)
        throw std::invalid_argument("SimplexVector::point_mass: state out of range");
    std::vector<double> p(n, 0.0);
    p[state] = 1.0;
    return SimplexVector(std::move(p));
}

double SimplexVector::mass_defect() const {
    double sum = 0.0;
    for (double v : probs_) sum += v;
    return std::abs(sum - 1.0);
}

double SimplexVector::min_entry() const {
    return *std::min_element(probs_.begin(), probs_.end());
}

double max_abs_diff(const SimplexVector& a, const SimplexVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double m = 0.0;
    for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace cubic
