#pragma once

#include <map>
#include <utility>
#include <vector>

#include "cubicproc/cubic_tensor.hpp"
#include "cubicproc/evolve.hpp"
#include "cubicproc/simplex.hpp"

namespace cubic {

/// Composition step of the two-parameter transition system:
///   out(i,j,k,l) = sum_{m,g,d} head(i,j,k,m) tail(m,g,d,l) y_g y_d.
CubicTensor compose_transition(const CubicTensor& head, const CubicTensor& tail,
                               const SimplexVector& y);

/// The two-parameter family p^[s,t] generated by a one-step law and an
/// initial distribution. Multi-step tensors are built recursively with the
/// canonical split tau = t-1,
///   p^[s,t] = compose_transition(p^[s,t-1], base, x^(t-1)),
/// where x^(.) is the trajectory iterated from x0. Tensors and trajectory
/// points are cached; the gap t-s is capped to keep accidental loops finite.
class TransitionFamily {
public:
    TransitionFamily(CubicTensor base, SimplexVector x0, int horizon_cap = 16);

    int size() const { return base_.size(); }
    const CubicTensor& base() const { return base_; }
    const SimplexVector& x0() const { return trajectory_.front(); }
    int horizon_cap() const { return horizon_cap_; }

    /// Distribution at integer time t >= 0.
    const SimplexVector& distribution(int t);

    /// Transition tensor p^[s,t] for 0 <= s, t >= s+1, t-s <= horizon_cap.
    const CubicTensor& transition(int s, int t);

private:
    CubicTensor base_;
    int horizon_cap_;
    std::vector<SimplexVector> trajectory_;
    std::map<std::pair<int, int>, CubicTensor> cache_;
};

/// Max-norm defect of the fundamental equation at split tau:
///   p^[s,t](i,j,k,l) - sum_{m,g,d} p^[s,tau](i,j,k,m) p^[tau,t](m,g,d,l)
///                                   x^(tau)_g x^(tau)_d.
/// Requires tau-s >= 1 and t-tau >= 1.
double fundamental_residual(TransitionFamily& f, int s, int tau, int t);

/// Max-norm defect of the contraction identity
///   x^(t)_l = sum_{i,j,k} p^[s,t](i,j,k,l) x^(s)_i x^(s)_j x^(s)_k
/// with x^(.) iterated step by step.
double contraction_identity_residual(TransitionFamily& f, int s, int t);

}  // namespace cubic
