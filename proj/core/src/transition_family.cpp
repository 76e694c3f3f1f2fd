#include "cubicproc/transition_family.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cubic {

CubicTensor compose_transition(const CubicTensor& head, const CubicTensor& tail,
                               const SimplexVector& y) {
    const int n = head.size();
    if (tail.size() != n || y.size() != n)
        throw std::invalid_argument("compose_transition: dimension mismatch");
    const auto q = contract_pair(tail.entries(), n, y.probs());
    std::vector<double> out(head.entries().size(), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const std::size_t base = head.index(i, j, k, 0);
                for (int m = 0; m < n; ++m) {
                    const double pm = head.entries()[base + m];
                    if (pm == 0.0) continue;
                    const double* qm = q.data() + static_cast<std::size_t>(m) * n;
                    for (int l = 0; l < n; ++l) out[base + l] += pm * qm[l];
                }
            }
    return CubicTensor(n, std::move(out));
}

TransitionFamily::TransitionFamily(CubicTensor base, SimplexVector x0, int horizon_cap)
    : base_(std::move(base)), horizon_cap_(horizon_cap) {
    if (x0.size() != base_.size())
        throw std::invalid_argument("TransitionFamily: base and x0 sizes differ");
    if (horizon_cap_ < 1)
        throw std::invalid_argument("TransitionFamily: horizon cap must be >= 1");
    trajectory_.push_back(std::move(x0));
}

const SimplexVector& TransitionFamily::distribution(int t) {
    if (t < 0) throw std::invalid_argument("TransitionFamily::distribution: t must be >= 0");
    while (static_cast<int>(trajectory_.size()) <= t)
        trajectory_.push_back(evolve(base_, trajectory_.back()));
    return trajectory_[static_cast<std::size_t>(t)];
}

const CubicTensor& TransitionFamily::transition(int s, int t) {
    if (s < 0 || t <= s)
        throw std::invalid_argument("TransitionFamily::transition: need 0 <= s < t");
    if (t - s > horizon_cap_)
        throw std::invalid_argument("TransitionFamily::transition: gap " +
                                    std::to_string(t - s) + " exceeds horizon cap " +
                                    std::to_string(horizon_cap_));
    if (t == s + 1) return base_;
    auto key = std::make_pair(s, t);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    CubicTensor composed = compose_transition(transition(s, t - 1), base_, distribution(t - 1));
    return cache_.emplace(key, std::move(composed)).first->second;
}

double fundamental_residual(TransitionFamily& f, int s, int tau, int t) {
    if (tau - s < 1 || t - tau < 1)
        throw std::invalid_argument("fundamental_residual: need tau-s >= 1 and t-tau >= 1");
    const CubicTensor& lhs = f.transition(s, t);
    CubicTensor rhs = compose_transition(f.transition(s, tau), f.transition(tau, t),
                                         f.distribution(tau));
    double worst = 0.0;
    for (std::size_t r = 0; r < lhs.entries().size(); ++r)
        worst = std::max(worst, std::abs(lhs.entries()[r] - rhs.entries()[r]));
    return worst;
}

double contraction_identity_residual(TransitionFamily& f, int s, int t) {
    if (t - s < 1)
        throw std::invalid_argument("contraction_identity_residual: need t >= s+1");
    const SimplexVector& xt = f.distribution(t);
    SimplexVector via_tensor = evolve(f.transition(s, t), f.distribution(s));
    return max_abs_diff(xt, via_tensor);
}

}  // namespace cubic
