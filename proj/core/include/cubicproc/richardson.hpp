#pragma once

#include <functional>
#include <vector>

namespace cubic {

/// Result of extrapolating a one-sided limit g(delta) -> L as delta -> 0+.
struct LimitEstimate {
    double value = 0.0;             // extrapolated limit
    double error = 0.0;             // discrepancy of the last extrapolation stage
    double convergence_ratio = 0.0; // |g(d0)-g(d1)| / |g(d1)-g(d2)|, ~2 for first order
    bool converged = false;         // ratio >= threshold and error not growing
};

/// Default delta schedule shared by every limit in the project.
const std::vector<double>& default_deltas();

/// Ratio below which a sequence of difference quotients is flagged as
/// non-convergent (clean first-order estimators show a ratio near 2).
inline constexpr double kConvergenceRatioFloor = 1.5;

/// Richardson extrapolation of g over a decreasing delta schedule (at least
/// two entries, consecutive ratios assumed 2). Assumes the error expansion
/// g(d) = L + c1 d + c2 d^2 + ...
LimitEstimate extrapolate_limit(const std::function<double(double)>& g,
                                const std::vector<double>& deltas);

LimitEstimate extrapolate_limit(const std::vector<double>& samples,
                                const std::vector<double>& deltas);

}  // namespace cubic
