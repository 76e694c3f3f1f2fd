#pragma once

#include <array>
#include <deque>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cubicproc/quadrature.hpp"
#include "cubicproc/richardson.hpp"

namespace cubic {

/// Transition density f(s, x, y, z, t, w) on the real line: the density of
/// the offspring state w given parents (x, y, z) over the gap [s, t],
/// defined for t - s >= 1.
struct Kernel {
    std::string name;
    std::function<double(double s, double x, double y, double z, double t, double w)> eval;

    // Metadata used to pick truncated quadrature domains per call.
    std::function<double(double x, double y, double z)> mean_hint;
    std::function<double(double s, double t)> sigma_hint;

    double operator()(double s, double x, double y, double z, double t, double w) const {
        return eval(s, x, y, z, t, w);
    }
};

/// Gaussian kernel with mean x + y + z and variance
///   v(s,t) = (2^(t+1) - 2^(s+2) + 1) / 2,
/// which is >= 1/2 whenever t - s >= 1:
///   f = exp(-(w-x-y-z)^2 / (2 v)) / sqrt(2 pi v).
///
/// With `squared_exponent = false` the exponent uses the plain difference
/// (w-x-y-z) instead of its square; that variant is not normalizable over
/// the line and exists so the defect can be demonstrated numerically.
Kernel example2_kernel(bool squared_exponent = true);

/// Closed-form variance of the offspring given the gap [s, t].
double example2_variance(double s, double t);

/// Probability measure on a truncated real-line grid: quadrature nodes and
/// weights plus a density value per node. A point mass is represented as a
/// single unit-weight node so every integral below handles it uniformly.
struct MeasureGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> density;
    double time = 0.0;

    double mass() const;
    double moment(int order, double center = 0.0) const;
    double mean() const { return moment(1) / mass(); }
    double variance() const;
};

MeasureGrid point_mass_measure(double at, double time = 0.0);
MeasureGrid gaussian_measure(double mean, double variance, const PanelRule& rule,
                             double time = 0.0);

/// Effective atoms of a measure: the products weight * density, skipping
/// atoms below 1e-14 of the peak. Dropped mass contributes below rounding
/// level to any bounded-integrand quadrature, and the inner pair loops over
/// atoms dominate the cost of the triple integrals.
struct AtomList {
    std::vector<double> nodes;
    std::vector<double> weights;
};

AtomList compact_atoms(const MeasureGrid& m);

struct GridSpec {
    double lo = -20.0;
    double hi = 20.0;
    int panels = 40;
    int points_per_panel = 16;
};

PanelRule make_rule(const GridSpec& spec);

/// One evolution step of the measure:
///   rho_t(w) = integral f(s,x,y,z,t,w) m(dx) m(dy) m(dz),
/// evaluated on the output grid by the triple quadrature over m's nodes.
/// The result is renormalized; the pre-renormalization defect |1 - mass| is
/// returned and a defect above `max_defect` throws (grid truncation failed).
struct EvolvedMeasure {
    MeasureGrid grid;
    double mass_defect = 0.0;
};

EvolvedMeasure evolve_measure_grid(const Kernel& k, const MeasureGrid& m, double s, double t,
                                   const GridSpec& out = {}, double max_defect = 0.01);

/// Residual of the density composition identity at probe points (x,y,z,w):
///   f(s,x,y,z,t,w) vs integral f(s,x,y,z,tau,u) f(tau,u,v,q,t,w)
///                             m_tau(dv) m_tau(dq) du.
struct CkProbeResult {
    std::array<double, 4> probe;  // x, y, z, w
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
};

struct CkResidual {
    double max_residual = 0.0;
    double truncation_defect = 0.0;  // worst |1 - mass| of the u-quadrature
    std::vector<CkProbeResult> probes;
};

CkResidual ck_residual_density(const Kernel& k, const MeasureGrid& m_tau, double s, double tau,
                               double t, const std::vector<std::array<double, 4>>& probes,
                               int panels = 24, int points_per_panel = 16,
                               double max_defect = 0.01);

/// Pointwise generator of the density family,
///   a(t,u,v,q,w) = lim_{D->0+} (f(t-1,u,v,q,t+D,w) - f(0,u,v,q,1,w)) / D,
/// with the unit-gap kernel as the baseline.
LimitEstimate density_generator(const Kernel& k, double t, double u, double v, double q,
                                double w, const std::vector<double>& deltas = default_deltas());

/// Variance bookkeeping of the composition identity at a parent probe:
/// lhs_variance belongs to f(s,x,y,z,t,.), rhs_variance to the composed
/// density, both measured by quadrature over the same w-grid. The gap
/// lhs - rhs quantifies how far the identity is from holding for a kernel
/// whose spread grows with the gap.
struct VarianceGap {
    double lhs_variance = 0.0;
    double rhs_variance = 0.0;
    double gap = 0.0;
};

VarianceGap ck_variance_gap(const Kernel& k, const MeasureGrid& m_tau, double s, double tau,
                            double t, std::array<double, 3> probe, int panels = 24,
                            int points_per_panel = 16);

enum class IntegroDirection { Forward, Backward };

/// Residual of the integro-differential equations at probes (x,y,z,w):
///   forward:  df/dt(s,..,t,w) =  iiint a(t,u,v,q,w) f(s,..,t-1,u) du m(dv) m(dq)
///   backward: df/ds(s,..,t,w) = -iiint a(s+1,x,y,z,u) f(s+1,u,v,q,t,w) du m(dv) m(dq)
/// The time derivative is a central difference evaluated at fd_delta and two
/// halvings; the reported ratio tracks how the residual settles.
struct IntegroProbeResult {
    std::array<double, 4> probe;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double convergence_ratio = 0.0;
};

struct IntegroResidual {
    double max_residual = 0.0;
    double min_convergence_ratio = 0.0;
    std::vector<IntegroProbeResult> probes;
};

IntegroResidual integro_residual(const Kernel& k,
                                 const std::function<const MeasureGrid&(double)>& measure_at,
                                 IntegroDirection direction, double s, double t,
                                 const std::vector<std::array<double, 4>>& probes,
                                 double fd_delta = 1e-2,
                                 const std::vector<double>& deltas = default_deltas(),
                                 int panels = 24, int points_per_panel = 16);

/// Caching provider of the measure trajectory seeded at m0: measure_at(0)
/// returns m0, measure_at(t >= 1) evolves m0 over [0, t] on `spec`.
class MeasureProvider {
public:
    MeasureProvider(Kernel k, MeasureGrid m0, GridSpec spec = {});
    const MeasureGrid& operator()(double t) const;

private:
    Kernel kernel_;
    MeasureGrid m0_;
    GridSpec spec_;
    // deque: references stay valid while the cache grows
    mutable std::deque<std::pair<double, MeasureGrid>> cache_;
};

}  // namespace cubic
