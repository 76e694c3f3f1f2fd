#pragma once

#include <array>
#include <functional>
#include <vector>

#include "cubicproc/kernel.hpp"
#include "cubicproc/richardson.hpp"

namespace cubic {

/// Finite-difference limits of the kernel's local moments, the coefficients
/// of the reduced differential equations.
///
/// Backward set, at probe (s, x, y, z):
///   a(D)  = int [f(s,..,s+1+D,u) - f(s+D,..,s+1+D,u)] (u-x) du,   A  = lim a/D
///   b2(D) = same with (u-x)^2,                                    B2 = lim b2/(2D)
///   alpha(D)  = int (v-y) m_{s+1+D}(dv),                          D1 = lim alpha
///   alpha2(D) = int (v-y)^2 m_{s+1+D}(dv),                        D2 = lim alpha2/(2D)
/// (alpha2 tends to the second moment of m_{s+1}, so D2 diverges for any
/// non-degenerate measure; the estimate is flagged non-convergent rather
/// than suppressed.)
///
/// Forward set, at probe (t, w), weights 1, (u-w), (u-w)^2/2:
///   Ntilde, Atilde, B2tilde = lim (1/D) iiint [f(t-1,u,v,q,t+D,w)
///                               - f(t-1,u,v,q,t,w)] weight du m(dv) m(dq)
/// plus the third-moment rate (weight |u-w|^3), reported as a smallness
/// check: the reduction to a differential equation needs it to vanish.
struct MomentCoefficients {
    double s = 0.0;
    std::array<double, 3> probe{};  // x, y, z
    double t = 0.0;
    double w = 0.0;

    LimitEstimate A;
    LimitEstimate B2;
    LimitEstimate D_y, D_z;
    LimitEstimate D2_y, D2_z;

    LimitEstimate Ntilde;
    LimitEstimate Atilde;
    LimitEstimate B2tilde;
    LimitEstimate third_moment_rate;
};

enum class CoefficientSet { Backward, Forward, Both };

MomentCoefficients moment_coefficients(const Kernel& k,
                                       const std::function<const MeasureGrid&(double)>& measure_at,
                                       double s, std::array<double, 3> probe, double t, double w,
                                       const std::vector<double>& deltas = default_deltas(),
                                       int panels = 24, int points_per_panel = 16,
                                       CoefficientSet which = CoefficientSet::Both);

enum class ReducedForm {
    BackwardPdePrinted,    // term table as printed, cross term read as d2/dxdz
    BackwardPdeConsistent, // term table re-derived from the Taylor expansion
    ForwardDisplaced,      // df/dt = N f(t-1) + A df/dw(t-1) + B2 d2f/dw2(t-1)
};

struct ReducedProbeResult {
    std::array<double, 6> probe;  // s, x, y, z, t, w
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double convergence_ratio = 0.0;  // of the time derivative under halving
};

struct ReducedResidual {
    ReducedForm form;
    double max_residual = 0.0;
    double min_convergence_ratio = 0.0;
    std::vector<ReducedProbeResult> probes;
};

/// Residual of the reduced (displaced-argument) differential equations at
/// probes (s,x,y,z,t,w). State partials of the kernel use 4th-order central
/// stencils with step `state_h`; the time derivative on the left side uses a
/// central difference at fd_delta with two halvings for the settle ratio.
ReducedResidual reduced_equation_residual(const Kernel& k,
                                          const std::function<const MeasureGrid&(double)>& measure_at,
                                          ReducedForm form,
                                          const std::vector<std::array<double, 6>>& probes,
                                          double fd_delta = 1e-2, double state_h = 0.1,
                                          const std::vector<double>& deltas = default_deltas(),
                                          int panels = 24, int points_per_panel = 16);

}  // namespace cubic
