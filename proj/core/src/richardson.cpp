#include "cubicproc/richardson.hpp"

#include <cmath>
#include <stdexcept>

namespace cubic {

const std::vector<double>& default_deltas() {
    static const std::vector<double> deltas{1e-2, 5e-3, 2.5e-3};
    return deltas;
}

LimitEstimate extrapolate_limit(const std::vector<double>& samples,
                                const std::vector<double>& deltas) {
    if (samples.size() != deltas.size())
        throw std::invalid_argument("extrapolate_limit: samples/deltas size mismatch");
    const std::size_t m = samples.size();
    if (m < 2) throw std::invalid_argument("extrapolate_limit: need at least 2 deltas");
    for (std::size_t i = 0; i < m; ++i) {
        if (!(deltas[i] > 0.0))
            throw std::invalid_argument("extrapolate_limit: deltas must be positive");
        if (i > 0 && !(deltas[i] < deltas[i - 1]))
            throw std::invalid_argument("extrapolate_limit: deltas must be decreasing");
    }

    // Richardson table for halving deltas and a first-order error expansion:
    // stage k eliminates the O(delta^k) term. row[i] holds the stage-k value
    // built from samples i..i+k; the error estimate is the gap between the
    // final value and the best estimate one stage earlier.
    std::vector<double> row = samples;
    double penultimate = row.back();
    for (std::size_t stage = 1; stage < m; ++stage) {
        if (row.size() == 2) penultimate = row[1];
        const double factor = std::exp2(static_cast<double>(stage));
        for (std::size_t i = 0; i + stage < m; ++i)
            row[i] = (factor * row[i + 1] - row[i]) / (factor - 1.0);
        row.resize(m - stage);
    }

    LimitEstimate est;
    est.value = row[0];
    est.error = std::abs(row[0] - penultimate);
    if (m >= 3) {
        const double d01 = std::abs(samples[0] - samples[1]);
        const double d12 = std::abs(samples[1] - samples[2]);
        // Differences at rounding level carry no order information; treat a
        // flat sequence as converged instead of dividing noise by noise.
        const double floor = 1e-12 * std::max(1.0, std::abs(est.value));
        if (d01 <= floor && d12 <= floor)
            est.convergence_ratio = 2.0;
        else
            est.convergence_ratio = d12 > 0.0 ? d01 / d12 : (d01 == 0.0 ? 2.0 : 0.0);
    } else {
        est.convergence_ratio = 2.0;
    }
    est.converged = est.convergence_ratio >= kConvergenceRatioFloor;
    return est;
}

LimitEstimate extrapolate_limit(const std::function<double(double)>& g,
                                const std::vector<double>& deltas) {
    std::vector<double> samples;
    samples.reserve(deltas.size());
    for (double d : deltas) samples.push_back(g(d));
    return extrapolate_limit(samples, deltas);
}

}  // namespace cubic
