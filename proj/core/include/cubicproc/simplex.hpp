#pragma once

#include <vector>

namespace cubic {

inline constexpr double kDefaultTol = 1e-9;

/// Probability distribution on the finite state space {0,...,n-1}.
///
/// Construction goes through one of the factories: `validated` applies the
/// load-time cleanup policy (clamp tiny negatives, renormalize a mass defect
/// within tol, reject anything worse), `unchecked` trusts the caller for
/// values that are simplex points by construction.
class SimplexVector {
public:
    SimplexVector() = default;

    static SimplexVector validated(std::vector<double> probs, double tol = kDefaultTol);
    static SimplexVector unchecked(std::vector<double> probs);
    static SimplexVector uniform(int n);
    static SimplexVector point_mass(int n, int state);

    int size() const { return static_cast<int>(probs_.size()); }
    double operator[](int i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }

    double mass_defect() const;  // |sum - 1|
    double min_entry() const;

private:
    explicit SimplexVector(std::vector<double> p) : probs_(std::move(p)) {}
    std::vector<double> probs_;
};

double max_abs_diff(const SimplexVector& a, const SimplexVector& b);

}  // namespace cubic
