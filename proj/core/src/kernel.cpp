#include "cubicproc/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cubic {

double example2_variance(double s, double t) {
    return (std::exp2(t + 1.0) - std::exp2(s + 2.0) + 1.0) / 2.0;
}

Kernel example2_kernel(bool squared_exponent) {
    Kernel k;
    k.name = squared_exponent ? "gaussian_sum_kernel" : "gaussian_sum_kernel_unsquared";
    k.mean_hint = [](double x, double y, double z) { return x + y + z; };
    k.sigma_hint = [](double s, double t) {
        return std::sqrt(std::max(example2_variance(s, t), 0.25));
    };
    k.eval = [squared_exponent](double s, double x, double y, double z, double t, double w) {
        if (t - s < 1.0 - 1e-12)
            throw std::invalid_argument("example2_kernel: need t - s >= 1");
        const double twice_var = std::exp2(t + 1.0) - std::exp2(s + 2.0) + 1.0;
        const double diff = w - x - y - z;
        const double arg = squared_exponent ? diff * diff : diff;
        return std::exp(-arg / twice_var) / std::sqrt(twice_var * std::numbers::pi);
    };
    return k;
}

double MeasureGrid::mass() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * density[i];
    return acc;
}

double MeasureGrid::moment(int order, double center) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        acc += weights[i] * density[i] * std::pow(nodes[i] - center, order);
    return acc;
}

double MeasureGrid::variance() const {
    const double m = mass();
    const double mu = moment(1) / m;
    return moment(2, mu) / m;
}

MeasureGrid point_mass_measure(double at, double time) {
    MeasureGrid m;
    m.nodes = {at};
    m.weights = {1.0};
    m.density = {1.0};
    m.time = time;
    return m;
}

MeasureGrid gaussian_measure(double mean, double variance, const PanelRule& rule, double time) {
    if (!(variance > 0.0)) throw std::invalid_argument("gaussian_measure: variance must be > 0");
    MeasureGrid m;
    m.nodes = rule.nodes;
    m.weights = rule.weights;
    m.density.resize(rule.nodes.size());
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * variance);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double d = rule.nodes[i] - mean;
        m.density[i] = norm * std::exp(-d * d / (2.0 * variance));
    }
    m.time = time;
    // Normalize away the truncation defect so the grid is a probability measure.
    const double mass = m.mass();
    for (double& v : m.density) v /= mass;
    return m;
}

PanelRule make_rule(const GridSpec& spec) {
    return composite_rule(spec.lo, spec.hi, spec.panels, spec.points_per_panel);
}

AtomList compact_atoms(const MeasureGrid& m) {
    AtomList atoms;
    double peak = 0.0;
    for (std::size_t i = 0; i < m.nodes.size(); ++i)
        peak = std::max(peak, std::abs(m.weights[i] * m.density[i]));
    const double cutoff = peak * 1e-14;
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
        const double w = m.weights[i] * m.density[i];
        if (std::abs(w) > cutoff) {
            atoms.nodes.push_back(m.nodes[i]);
            atoms.weights.push_back(w);
        }
    }
    return atoms;
}

EvolvedMeasure evolve_measure_grid(const Kernel& k, const MeasureGrid& m, double s, double t,
                                   const GridSpec& out, double max_defect) {
    if (t - s < 1.0 - 1e-12)
        throw std::invalid_argument("evolve_measure_grid: need t - s >= 1");
    const PanelRule rule = make_rule(out);
    const AtomList atoms = compact_atoms(m);

    EvolvedMeasure result;
    result.grid.nodes = rule.nodes;
    result.grid.weights = rule.weights;
    result.grid.density.assign(rule.nodes.size(), 0.0);
    result.grid.time = t;

    // Triple quadrature over the source atoms for each output node. Kernels
    // are symmetric in their parents, so ordered triples a <= b <= c with
    // multiplicities cover the full sum at a sixth of the evaluations; a
    // point mass still costs a single evaluation per node.
    const std::size_t na = atoms.nodes.size();
    for (std::size_t wi = 0; wi < rule.nodes.size(); ++wi) {
        const double w = rule.nodes[wi];
        double acc = 0.0;
        for (std::size_t a = 0; a < na; ++a) {
            for (std::size_t b = a; b < na; ++b) {
                const double wab = atoms.weights[a] * atoms.weights[b];
                for (std::size_t c = b; c < na; ++c) {
                    double mult = 6.0;
                    if (a == b && b == c) mult = 1.0;
                    else if (a == b || b == c) mult = 3.0;
                    acc += mult * wab * atoms.weights[c] *
                           k(s, atoms.nodes[a], atoms.nodes[b], atoms.nodes[c], t, w);
                }
            }
        }
        result.grid.density[wi] = acc;
    }

    const double mass = result.grid.mass();
    result.mass_defect = std::abs(1.0 - mass);
    if (result.mass_defect > max_defect)
        throw std::runtime_error("evolve_measure_grid: mass defect " +
                                 std::to_string(result.mass_defect) +
                                 " signals grid truncation failure");
    if (mass > 0.0)
        for (double& v : result.grid.density) v /= mass;
    return result;
}

CkResidual ck_residual_density(const Kernel& k, const MeasureGrid& m_tau, double s, double tau,
                               double t, const std::vector<std::array<double, 4>>& probes,
                               int panels, int points_per_panel, double max_defect) {
    if (tau - s < 1.0 - 1e-12 || t - tau < 1.0 - 1e-12)
        throw std::invalid_argument("ck_residual_density: need tau-s >= 1 and t-tau >= 1");

    const AtomList atoms = compact_atoms(m_tau);
    const std::size_t na = atoms.nodes.size();

    CkResidual out;
    for (const auto& probe : probes) {
        const auto [x, y, z, w] = probe;
        const double mu = k.mean_hint(x, y, z);
        const double sigma = k.sigma_hint(s, tau);
        const PanelRule u_rule = composite_rule(mu - 8.0 * sigma, mu + 8.0 * sigma, panels,
                                                points_per_panel);

        double rhs = 0.0;
        double first_mass = 0.0;
        for (std::size_t ui = 0; ui < u_rule.nodes.size(); ++ui) {
            const double u = u_rule.nodes[ui];
            const double fu = k(s, x, y, z, tau, u);
            first_mass += u_rule.weights[ui] * fu;
            if (fu == 0.0) continue;
            double inner = 0.0;
            for (std::size_t a = 0; a < na; ++a)
                for (std::size_t b = 0; b < na; ++b)
                    inner += atoms.weights[a] * atoms.weights[b] *
                             k(tau, u, atoms.nodes[a], atoms.nodes[b], t, w);
            rhs += u_rule.weights[ui] * fu * inner;
        }
        const double defect = std::abs(1.0 - first_mass);
        out.truncation_defect = std::max(out.truncation_defect, defect);
        if (defect > max_defect)
            throw std::runtime_error("ck_residual_density: u-quadrature mass defect " +
                                     std::to_string(defect));

        CkProbeResult pr;
        pr.probe = probe;
        pr.lhs = k(s, x, y, z, t, w);
        pr.rhs = rhs;
        pr.residual = std::abs(pr.lhs - pr.rhs);
        out.max_residual = std::max(out.max_residual, pr.residual);
        out.probes.push_back(pr);
    }
    return out;
}

VarianceGap ck_variance_gap(const Kernel& k, const MeasureGrid& m_tau, double s, double tau,
                            double t, std::array<double, 3> probe, int panels,
                            int points_per_panel) {
    const auto [x, y, z] = probe;
    const double mu = k.mean_hint(x, y, z);
    const double sigma_st = k.sigma_hint(s, t);
    const PanelRule w_rule =
        composite_rule(mu - 8.0 * sigma_st, mu + 8.0 * sigma_st, panels, points_per_panel);
    const double sigma_stau = k.sigma_hint(s, tau);
    const PanelRule u_rule =
        composite_rule(mu - 8.0 * sigma_stau, mu + 8.0 * sigma_stau, panels, points_per_panel);
    const AtomList atoms = compact_atoms(m_tau);
    const std::size_t na = atoms.nodes.size();

    MeasureGrid lhs, rhs;
    lhs.nodes = rhs.nodes = w_rule.nodes;
    lhs.weights = rhs.weights = w_rule.weights;
    lhs.density.resize(w_rule.nodes.size());
    rhs.density.resize(w_rule.nodes.size());

    for (std::size_t wi = 0; wi < w_rule.nodes.size(); ++wi) {
        const double w = w_rule.nodes[wi];
        lhs.density[wi] = k(s, x, y, z, t, w);
        double acc = 0.0;
        for (std::size_t ui = 0; ui < u_rule.nodes.size(); ++ui) {
            const double u = u_rule.nodes[ui];
            const double fu = k(s, x, y, z, tau, u);
            if (fu == 0.0) continue;
            double inner = 0.0;
            for (std::size_t a = 0; a < na; ++a)
                for (std::size_t b = 0; b < na; ++b)
                    inner += atoms.weights[a] * atoms.weights[b] *
                             k(tau, u, atoms.nodes[a], atoms.nodes[b], t, w);
            acc += u_rule.weights[ui] * fu * inner;
        }
        rhs.density[wi] = acc;
    }

    VarianceGap out;
    out.lhs_variance = lhs.variance();
    out.rhs_variance = rhs.variance();
    out.gap = out.lhs_variance - out.rhs_variance;
    return out;
}

LimitEstimate density_generator(const Kernel& k, double t, double u, double v, double q,
                                double w, const std::vector<double>& deltas) {
    if (t < 1.0 - 1e-12) throw std::invalid_argument("density_generator: need t >= 1");
    const double base = k(0.0, u, v, q, 1.0, w);
    return extrapolate_limit(
        [&](double delta) { return (k(t - 1.0, u, v, q, t + delta, w) - base) / delta; }, deltas);
}

IntegroResidual integro_residual(const Kernel& k,
                                 const std::function<const MeasureGrid&(double)>& measure_at,
                                 IntegroDirection direction, double s, double t,
                                 const std::vector<std::array<double, 4>>& probes,
                                 double fd_delta, const std::vector<double>& deltas, int panels,
                                 int points_per_panel) {
    const bool forward = direction == IntegroDirection::Forward;
    if (forward && !(t >= s + 2.0))
        throw std::invalid_argument("integro_residual: forward needs t >= s + 2");
    if (!forward && !(t > s + 2.0))
        throw std::invalid_argument("integro_residual: backward needs t > s + 2");

    const MeasureGrid& m = measure_at(forward ? t - 1.0 : s + 1.0);
    const AtomList atoms = compact_atoms(m);
    const std::size_t na = atoms.nodes.size();

    IntegroResidual out;
    out.min_convergence_ratio = std::numeric_limits<double>::infinity();
    for (const auto& probe : probes) {
        const auto [x, y, z, w] = probe;

        double rhs = 0.0;
        if (forward) {
            // u runs over the support of f(s,x,y,z,t-1,.), the delayed density.
            const double mu = k.mean_hint(x, y, z);
            const double sigma = k.sigma_hint(s, t - 1.0);
            const PanelRule u_rule = composite_rule(mu - 8.0 * sigma, mu + 8.0 * sigma, panels,
                                                    points_per_panel);
            for (std::size_t ui = 0; ui < u_rule.nodes.size(); ++ui) {
                const double u = u_rule.nodes[ui];
                const double fu = k(s, x, y, z, t - 1.0, u);
                if (fu == 0.0) continue;
                double inner = 0.0;
                for (std::size_t a = 0; a < na; ++a)
                    for (std::size_t b = 0; b < na; ++b)
                        inner += atoms.weights[a] * atoms.weights[b] *
                                 density_generator(k, t, u, atoms.nodes[a], atoms.nodes[b], w,
                                                   deltas)
                                     .value;
                rhs += u_rule.weights[ui] * fu * inner;
            }
        } else {
            // u runs over the offspring support of the generator at s+1,
            // which decays like the unit-gap kernel around x+y+z.
            const double mu = k.mean_hint(x, y, z);
            const double sigma = std::max(k.sigma_hint(s, s + 1.0), 1.0);
            const PanelRule u_rule = composite_rule(mu - 10.0 * sigma, mu + 10.0 * sigma, panels,
                                                    points_per_panel);
            for (std::size_t ui = 0; ui < u_rule.nodes.size(); ++ui) {
                const double u = u_rule.nodes[ui];
                const double a_val = density_generator(k, s + 1.0, x, y, z, u, deltas).value;
                if (a_val == 0.0) continue;
                double inner = 0.0;
                for (std::size_t a = 0; a < na; ++a)
                    for (std::size_t b = 0; b < na; ++b)
                        inner += atoms.weights[a] * atoms.weights[b] *
                                 k(s + 1.0, u, atoms.nodes[a], atoms.nodes[b], t, w);
                rhs -= u_rule.weights[ui] * a_val * inner;
            }
        }

        auto lhs_at = [&](double delta) {
            if (forward)
                return (k(s, x, y, z, t + delta, w) - k(s, x, y, z, t - delta, w)) /
                       (2.0 * delta);
            return (k(s + delta, x, y, z, t, w) - k(s - delta, x, y, z, t, w)) / (2.0 * delta);
        };
        const double l0 = lhs_at(fd_delta);
        const double l1 = lhs_at(fd_delta / 2.0);
        const double l2 = lhs_at(fd_delta / 4.0);

        IntegroProbeResult pr;
        pr.probe = probe;
        pr.lhs = l2;
        pr.rhs = rhs;
        pr.residual = std::abs(l2 - rhs);
        const double d01 = std::abs(std::abs(l0 - rhs) - std::abs(l1 - rhs));
        const double d12 = std::abs(std::abs(l1 - rhs) - std::abs(l2 - rhs));
        pr.convergence_ratio = d12 > 0.0 ? d01 / d12 : 4.0;
        out.max_residual = std::max(out.max_residual, pr.residual);
        out.min_convergence_ratio = std::min(out.min_convergence_ratio, pr.convergence_ratio);
        out.probes.push_back(pr);
    }
    if (probes.empty()) out.min_convergence_ratio = 0.0;
    return out;
}

MeasureProvider::MeasureProvider(Kernel k, MeasureGrid m0, GridSpec spec)
    : kernel_(std::move(k)), m0_(std::move(m0)), spec_(spec) {}

const MeasureGrid& MeasureProvider::operator()(double t) const {
    if (std::abs(t - m0_.time) < 1e-12) return m0_;
    if (t < m0_.time + 1.0 - 1e-12)
        throw std::invalid_argument("MeasureProvider: t must be the seed time or >= seed + 1");
    for (const auto& [cached_t, grid] : cache_)
        if (std::abs(cached_t - t) < 1e-12) return grid;
    EvolvedMeasure evolved = evolve_measure_grid(kernel_, m0_, m0_.time, t, spec_);
    cache_.emplace_back(t, std::move(evolved.grid));
    return cache_.back().second;
}

}  // namespace cubic
