#pragma once

#include <functional>
#include <vector>

#include "cubicproc/closed_form.hpp"
#include "cubicproc/generator.hpp"
#include "cubicproc/simplex.hpp"

namespace cubic {

/// Grid solution of a retarded equation with unit delay,
///   dx/dt = rhs(t, x(t-1)),
/// integrated by the method of steps: on each unit interval the delayed
/// argument is known data, so a classical 4th-order one-step scheme applies.
/// Off-grid delayed lookups (the half-step stages) use cubic Hermite
/// interpolation on the stored values and derivatives.
struct DdeSolution {
    double t_start = 0.0;
    double t_end = 0.0;
    double h = 0.0;
    std::size_t dim = 0;

    std::vector<double> times;                    // t_start, t_start+h, ..., t_end
    std::vector<std::vector<double>> values;      // state per grid point
    std::vector<std::vector<double>> derivatives; // rhs per grid point
    std::vector<double> history_times;            // [t_start-1, t_start] on the same step
    std::vector<std::vector<double>> history_values;

    /// State at arbitrary tau in [t_start-1, t_end] (Hermite between nodes).
    std::vector<double> sample(double tau) const;

    /// max_t |sum(state(t)) - sum(state(t_start))|; zero-row-sum right sides
    /// conserve total mass, so this measures integration drift.
    double mass_drift() const;
};

using DdeRhs = std::function<std::vector<double>(double t, const std::vector<double>& delayed)>;
using DdeHistory = std::function<std::vector<double>(double t)>;

/// Core method-of-steps integrator. `h` must divide 1 exactly so that the
/// delayed argument of every grid point lands on the grid; `history` must be
/// evaluable on [t0-1, t0].
DdeSolution integrate_unit_delay(const DdeRhs& rhs, const DdeHistory& history, double t0,
                                 double t_end, double h);

/// Distribution dynamics
///   dx_k/dt = sum_{i,j,l} a(i,j,l,k)(t) x_i(t-1) x_j(t-1) x_l(t-1).
DdeSolution integrate_distribution_dde(const std::function<GeneratorTensor(double)>& a,
                                       const std::function<SimplexVector(double)>& history,
                                       double t0, double t_end, double h);

/// Forward transition dynamics
///   d/dt p^[s,t](i,j,k,l) =
///     sum_{m,g,d} p^[s,t-1](i,j,k,m) a(m,g,d,l)(t) x_g(t-1) x_d(t-1),
/// seeded on [s+1, s+2] and integrated from t0 = s+2. The delayed factor
/// carries the free parent indices via the summation index m; the summed
/// variant that repeats the offspring index is handled by the residual
/// evaluators, not integrated.
DdeSolution integrate_forward_transition_dde(
    int n, const std::function<std::vector<double>(double)>& seed,
    const std::function<GeneratorTensor(double)>& a,
    const std::function<SimplexVector(double)>& trajectory, int s, double t_end, double h);

/// Convenience overload wiring seed, generator and trajectory to a
/// closed-form family.
DdeSolution integrate_forward_transition_dde(const ClosedFormFamily& f,
                                             const SimplexVector& x0, int s, double t_end,
                                             double h,
                                             const std::vector<double>& deltas = default_deltas());

/// Residual pair for the advanced-argument transition equation
///   d/ds p^[s,t](i,j,k,l) =
///     -sum_{m,g,d} a(i,j,k,m)(s+1) x_g(s+1) x_d(s+1) p^[s+1,t](m,g,d,l).
/// `corrected` uses that index linkage (the generator carries the free
/// parents, the forward tensor the summation triple); `printed` repeats
/// (m,g,d,l) on both factors, which decouples the free parent indices.
/// Advanced-argument equations are evaluated as identities along a known
/// family only; integrating them forward is ill-posed and not offered.
struct BackwardResidual {
    double corrected = 0.0;
    double printed = 0.0;
    double convergence_ratio = 0.0;  // of the corrected residual under delta halving
};

BackwardResidual backward_residual(const ClosedFormFamily& f, const SimplexVector& x0,
                                   double s, double t, double fd_delta,
                                   const std::vector<double>& deltas = default_deltas());

/// Residual of the distribution equation along a closed-form family:
/// dx_k/dt by central difference on the family trajectory vs the generator
/// contraction of x(t-1). Also reports how the residual settles as the
/// differencing step is halved twice.
struct DistributionResidual {
    double residual = 0.0;           // at the finest differencing step
    double convergence_ratio = 0.0;
};

DistributionResidual distribution_dde_residual(const ClosedFormFamily& f,
                                               const SimplexVector& x0, double t,
                                               double fd_delta,
                                               const std::vector<double>& deltas = default_deltas());

}  // namespace cubic
