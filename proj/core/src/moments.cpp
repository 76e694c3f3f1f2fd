#include "cubicproc/moments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cubic {

namespace {

// 4th-order central stencils on a unit-parameter offset function.
double d1(const std::function<double(double)>& g, double h) {
    return (-g(2.0 * h) + 8.0 * g(h) - 8.0 * g(-h) + g(-2.0 * h)) / (12.0 * h);
}

double d2(const std::function<double(double)>& g, double h) {
    return (-g(2.0 * h) + 16.0 * g(h) - 30.0 * g(0.0) + 16.0 * g(-h) - g(-2.0 * h)) /
           (12.0 * h * h);
}

// All state partials of f(s1, x, y, z, t, w) used by the reduced forms.
struct StateDerivs {
    double f, fx, fxx, fxy, fxz, fxxy, fxxz, fyyx, fzzx, fxyz;
};

StateDerivs state_derivs(const Kernel& k, double s1, double x, double y, double z, double t,
                         double w, double h) {
    auto at = [&](double dx, double dy, double dz) {
        return k(s1, x + dx, y + dy, z + dz, t, w);
    };
    StateDerivs d{};
    d.f = at(0, 0, 0);
    d.fx = d1([&](double dx) { return at(dx, 0, 0); }, h);
    d.fxx = d2([&](double dx) { return at(dx, 0, 0); }, h);
    d.fxy = d1([&](double dy) { return d1([&](double dx) { return at(dx, dy, 0); }, h); }, h);
    d.fxz = d1([&](double dz) { return d1([&](double dx) { return at(dx, 0, dz); }, h); }, h);
    d.fxxy = d1([&](double dy) { return d2([&](double dx) { return at(dx, dy, 0); }, h); }, h);
    d.fxxz = d1([&](double dz) { return d2([&](double dx) { return at(dx, 0, dz); }, h); }, h);
    d.fyyx = d1([&](double dx) { return d2([&](double dy) { return at(dx, dy, 0); }, h); }, h);
    d.fzzx = d1([&](double dx) { return d2([&](double dz) { return at(dx, 0, dz); }, h); }, h);
    d.fxyz = d1([&](double dz) {
        return d1([&](double dy) { return d1([&](double dx) { return at(dx, dy, dz); }, h); }, h);
    }, h);
    return d;
}

}  // namespace

MomentCoefficients moment_coefficients(const Kernel& k,
                                       const std::function<const MeasureGrid&(double)>& measure_at,
                                       double s, std::array<double, 3> probe, double t, double w,
                                       const std::vector<double>& deltas, int panels,
                                       int points_per_panel, CoefficientSet which) {
    if (deltas.size() < 2)
        throw std::invalid_argument("moment_coefficients: need at least 2 deltas");
    const auto [x, y, z] = probe;

    MomentCoefficients out;
    out.s = s;
    out.probe = probe;
    out.t = t;
    out.w = w;

    // Backward set: local moments of the kernel difference around the probe.
    if (which != CoefficientSet::Forward) {
        const double mu = k.mean_hint(x, y, z);
        const double sigma = k.sigma_hint(s, s + 1.0 + deltas.front());
        const PanelRule u_rule =
            composite_rule(mu - 8.0 * sigma, mu + 8.0 * sigma, panels, points_per_panel);

        std::vector<double> a_over_d, b2_over_2d, alpha_y, alpha_z, alpha2_y, alpha2_z;
        for (double delta : deltas) {
            double a_val = 0.0, b2_val = 0.0;
            for (std::size_t i = 0; i < u_rule.nodes.size(); ++i) {
                const double u = u_rule.nodes[i];
                const double diff = k(s, x, y, z, s + 1.0 + delta, u) -
                                    k(s + delta, x, y, z, s + 1.0 + delta, u);
                a_val += u_rule.weights[i] * diff * (u - x);
                b2_val += u_rule.weights[i] * diff * (u - x) * (u - x);
            }
            a_over_d.push_back(a_val / delta);
            b2_over_2d.push_back(b2_val / (2.0 * delta));

            const MeasureGrid& m = measure_at(s + 1.0 + delta);
            const double mass = m.mass();
            alpha_y.push_back(m.moment(1, y) / mass);
            alpha_z.push_back(m.moment(1, z) / mass);
            alpha2_y.push_back(m.moment(2, y) / mass / (2.0 * delta));
            alpha2_z.push_back(m.moment(2, z) / mass / (2.0 * delta));
        }
        out.A = extrapolate_limit(a_over_d, deltas);
        out.B2 = extrapolate_limit(b2_over_2d, deltas);
        out.D_y = extrapolate_limit(alpha_y, deltas);
        out.D_z = extrapolate_limit(alpha_z, deltas);
        out.D2_y = extrapolate_limit(alpha2_y, deltas);
        out.D2_z = extrapolate_limit(alpha2_z, deltas);
    }

    // Forward set: triple-integral limits with weights 1, (u-w), (u-w)^2/2,
    // plus the third-moment rate the reduction needs to vanish.
    if (which != CoefficientSet::Backward) {
        const AtomList atoms = compact_atoms(measure_at(t - 1.0));
        const std::size_t na = atoms.nodes.size();
        const double sigma = k.sigma_hint(t - 1.0, t + deltas.front());

        std::vector<double> n_s, a_s, b2_s, m3_s;
        for (double delta : deltas) {
            double acc_n = 0.0, acc_a = 0.0, acc_b2 = 0.0, acc_m3 = 0.0;
            for (std::size_t ia = 0; ia < na; ++ia) {
                for (std::size_t ib = 0; ib < na; ++ib) {
                    const double pair_w = atoms.weights[ia] * atoms.weights[ib];
                    const double center = w - atoms.nodes[ia] - atoms.nodes[ib];
                    const PanelRule u_rule = composite_rule(center - 8.0 * sigma,
                                                            center + 8.0 * sigma, panels,
                                                            points_per_panel);
                    for (std::size_t i = 0; i < u_rule.nodes.size(); ++i) {
                        const double u = u_rule.nodes[i];
                        const double diff =
                            k(t - 1.0, u, atoms.nodes[ia], atoms.nodes[ib], t + delta, w) -
                            k(t - 1.0, u, atoms.nodes[ia], atoms.nodes[ib], t, w);
                        const double quad_w = pair_w * u_rule.weights[i];
                        const double r = u - w;
                        acc_n += quad_w * diff;
                        acc_a += quad_w * diff * r;
                        acc_b2 += quad_w * diff * r * r;
                        acc_m3 += quad_w * diff * std::abs(r) * r * r;
                    }
                }
            }
            n_s.push_back(acc_n / delta);
            a_s.push_back(acc_a / delta);
            b2_s.push_back(acc_b2 / (2.0 * delta));
            m3_s.push_back(acc_m3 / delta);
        }
        out.Ntilde = extrapolate_limit(n_s, deltas);
        out.Atilde = extrapolate_limit(a_s, deltas);
        out.B2tilde = extrapolate_limit(b2_s, deltas);
        out.third_moment_rate = extrapolate_limit(m3_s, deltas);
    }
    return out;
}

ReducedResidual reduced_equation_residual(const Kernel& k,
                                          const std::function<const MeasureGrid&(double)>& measure_at,
                                          ReducedForm form,
                                          const std::vector<std::array<double, 6>>& probes,
                                          double fd_delta, double state_h,
                                          const std::vector<double>& deltas, int panels,
                                          int points_per_panel) {
    ReducedResidual out;
    out.form = form;
    out.min_convergence_ratio = std::numeric_limits<double>::infinity();

    for (const auto& probe : probes) {
        const auto [s, x, y, z, t, w] = probe;
        const bool forward = form == ReducedForm::ForwardDisplaced;
        const MomentCoefficients c =
            moment_coefficients(k, measure_at, s, {x, y, z}, t, w, deltas, panels,
                                points_per_panel,
                                forward ? CoefficientSet::Forward : CoefficientSet::Backward);

        double rhs = 0.0;
        if (forward) {
            auto fw = [&](double dw) { return k(s, x, y, z, t - 1.0, w + dw); };
            const double f0 = fw(0.0);
            const double dfdw = d1(fw, state_h);
            const double d2fdw2 = d2(fw, state_h);
            rhs = c.Ntilde.value * f0 + c.Atilde.value * dfdw + c.B2tilde.value * d2fdw2;
        } else {
            const StateDerivs d = state_derivs(k, s + 1.0, x, y, z, t, w, state_h);
            const double A = c.A.value, B2 = c.B2.value;
            const double Dy = c.D_y.value, Dz = c.D_z.value;
            const double D2y = c.D2_y.value, D2z = c.D2_z.value;
            if (form == ReducedForm::BackwardPdePrinted) {
                rhs = -A * d.fx - B2 * d.fxx - 0.5 * A * Dy * d.fxy - A * Dz * d.fxz -
                      B2 * Dz * d.fxxz - 0.5 * A * D2y * d.fyyx - 0.5 * A * D2z * d.fzzx -
                      A * Dy * Dz * d.fxyz;
            } else {
                // Terms that survive a consistent limit of the Taylor
                // expansion: the products of two O(delta) moments drop out.
                rhs = -A * d.fx - B2 * d.fxx - A * Dy * d.fxy - A * Dz * d.fxz -
                      B2 * Dy * d.fxxy - B2 * Dz * d.fxxz - A * Dy * Dz * d.fxyz;
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

        ReducedProbeResult pr;
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

}  // namespace cubic
