#include "cubicproc/dde.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cubicproc/evolve.hpp"

namespace cubic {

namespace {

long steps_per_unit(double h) {
    if (!(h > 0.0) || h > 1.0) throw std::invalid_argument("dde: step must lie in (0, 1]");
    const double spu = 1.0 / h;
    const long rounded = std::lround(spu);
    if (rounded < 1 || std::abs(spu - static_cast<double>(rounded)) > 1e-9)
        throw std::invalid_argument("dde: step h must divide the unit delay exactly");
    return rounded;
}

std::vector<double> hermite(const std::vector<double>& y0, const std::vector<double>& d0,
                            const std::vector<double>& y1, const std::vector<double>& d1,
                            double theta, double h) {
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + theta;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    std::vector<double> out(y0.size());
    for (std::size_t i = 0; i < y0.size(); ++i)
        out[i] = h00 * y0[i] + h10 * h * d0[i] + h01 * y1[i] + h11 * h * d1[i];
    return out;
}

}  // namespace

std::vector<double> DdeSolution::sample(double tau) const {
    if (tau <= t_start + 1e-12) {
        // History segment: linear between the stored samples.
        if (tau < t_start - 1.0 - 1e-9)
            throw std::invalid_argument("DdeSolution::sample: before the history segment");
        double pos = (tau - history_times.front()) / h;
        long j = std::lround(std::floor(pos + 1e-9));
        j = std::max<long>(0, std::min<long>(j, static_cast<long>(history_times.size()) - 1));
        double theta = pos - static_cast<double>(j);
        if (theta < 1e-9 || j + 1 >= static_cast<long>(history_times.size()))
            return history_values[static_cast<std::size_t>(j)];
        std::vector<double> out(dim);
        const auto& a = history_values[static_cast<std::size_t>(j)];
        const auto& b = history_values[static_cast<std::size_t>(j + 1)];
        for (std::size_t i = 0; i < dim; ++i) out[i] = (1.0 - theta) * a[i] + theta * b[i];
        return out;
    }
    if (tau > t_end + 1e-9)
        throw std::invalid_argument("DdeSolution::sample: beyond the solution");
    double pos = (tau - t_start) / h;
    long j = std::lround(std::floor(pos + 1e-9));
    const long last = static_cast<long>(times.size()) - 1;
    j = std::max<long>(0, std::min<long>(j, last));
    double theta = pos - static_cast<double>(j);
    if (std::abs(theta) < 1e-9 || j == last) return values[static_cast<std::size_t>(j)];
    return hermite(values[static_cast<std::size_t>(j)], derivatives[static_cast<std::size_t>(j)],
                   values[static_cast<std::size_t>(j + 1)],
                   derivatives[static_cast<std::size_t>(j + 1)], theta, h);
}

double DdeSolution::mass_drift() const {
    double ref = 0.0;
    for (double v : values.front()) ref += v;
    double worst = 0.0;
    for (const auto& state : values) {
        double sum = 0.0;
        for (double v : state) sum += v;
        worst = std::max(worst, std::abs(sum - ref));
    }
    return worst;
}

DdeSolution integrate_unit_delay(const DdeRhs& rhs, const DdeHistory& history, double t0,
                                 double t_end, double h) {
    const long spu = steps_per_unit(h);
    if (!(t_end > t0)) throw std::invalid_argument("dde: need t_end > t_start");
    const double span = t_end - t0;
    const long steps = std::lround(span / h);
    if (steps < 1 || std::abs(steps * h - span) > 1e-9)
        throw std::invalid_argument("dde: t_end - t_start must be a multiple of h");

    DdeSolution sol;
    sol.t_start = t0;
    sol.t_end = t_end;
    sol.h = h;

    sol.history_times.resize(static_cast<std::size_t>(spu) + 1);
    sol.history_values.resize(sol.history_times.size());
    for (long j = 0; j <= spu; ++j) {
        const double tj = t0 - 1.0 + static_cast<double>(j) * h;
        sol.history_times[static_cast<std::size_t>(j)] = tj;
        sol.history_values[static_cast<std::size_t>(j)] = history(tj);
    }
    sol.dim = sol.history_values.back().size();

    sol.times.resize(static_cast<std::size_t>(steps) + 1);
    sol.values.resize(sol.times.size());
    sol.derivatives.resize(sol.times.size());
    for (long j = 0; j <= steps; ++j) sol.times[static_cast<std::size_t>(j)] = t0 + j * h;
    sol.values[0] = sol.history_values.back();

    // Delayed state at tau: exact history on the first unit interval, cubic
    // Hermite on the already-computed grid afterwards.
    auto delayed = [&](double tau, long frontier) -> std::vector<double> {
        if (tau <= t0 + 1e-12) return history(tau);
        const double pos = (tau - t0) / h;
        long j = std::lround(std::floor(pos + 1e-9));
        const double theta = pos - static_cast<double>(j);
        if (std::abs(theta) < 1e-9) return sol.values[static_cast<std::size_t>(j)];
        if (j + 1 > frontier)
            throw std::logic_error("dde: delayed lookup beyond the computed frontier");
        return hermite(sol.values[static_cast<std::size_t>(j)],
                       sol.derivatives[static_cast<std::size_t>(j)],
                       sol.values[static_cast<std::size_t>(j + 1)],
                       sol.derivatives[static_cast<std::size_t>(j + 1)], theta, h);
    };

    sol.derivatives[0] = rhs(t0, delayed(t0 - 1.0, 0));
    for (long j = 0; j < steps; ++j) {
        const double tj = sol.times[static_cast<std::size_t>(j)];
        const auto& k1 = sol.derivatives[static_cast<std::size_t>(j)];
        // The right side depends on the delayed state only, so the two
        // half-step stages of the classical scheme coincide.
        const auto k2 = rhs(tj + 0.5 * h, delayed(tj + 0.5 * h - 1.0, j));
        const auto k4 = rhs(tj + h, delayed(tj + h - 1.0, j));
        std::vector<double> next(sol.dim);
        for (std::size_t i = 0; i < sol.dim; ++i)
            next[i] = sol.values[static_cast<std::size_t>(j)][i] +
                      h / 6.0 * (k1[i] + 4.0 * k2[i] + k4[i]);
        sol.values[static_cast<std::size_t>(j + 1)] = std::move(next);
        sol.derivatives[static_cast<std::size_t>(j + 1)] = k4;
    }
    return sol;
}

DdeSolution integrate_distribution_dde(const std::function<GeneratorTensor(double)>& a,
                                       const std::function<SimplexVector(double)>& history,
                                       double t0, double t_end, double h) {
    DdeRhs rhs = [&a](double t, const std::vector<double>& delayed) {
        GeneratorTensor gen = a(t);
        return contract_parents(gen.entries, gen.n, delayed);
    };
    DdeHistory hist = [&history](double t) { return history(t).probs(); };
    return integrate_unit_delay(rhs, hist, t0, t_end, h);
}

DdeSolution integrate_forward_transition_dde(
    int n, const std::function<std::vector<double>(double)>& seed,
    const std::function<GeneratorTensor(double)>& a,
    const std::function<SimplexVector(double)>& trajectory, int s, double t_end, double h) {
    if (s < 0) throw std::invalid_argument("integrate_forward_transition_dde: need s >= 0");
    if (!(t_end >= s + 2.0))
        throw std::invalid_argument("integrate_forward_transition_dde: need t_end >= s + 2");
    DdeRhs rhs = [n, &a, &trajectory](double t, const std::vector<double>& delayed) {
        GeneratorTensor gen = a(t);
        const SimplexVector y = trajectory(t - 1.0);
        const auto w = contract_pair(gen.entries, n, y.probs());  // w[m,l]
        std::vector<double> out(delayed.size(), 0.0);
        const std::size_t rows = delayed.size() / static_cast<std::size_t>(n);
        for (std::size_t r = 0; r < rows; ++r) {
            const double* p = delayed.data() + r * n;
            double* o = out.data() + r * n;
            for (int m = 0; m < n; ++m) {
                const double pm = p[m];
                if (pm == 0.0) continue;
                const double* wm = w.data() + static_cast<std::size_t>(m) * n;
                for (int l = 0; l < n; ++l) o[l] += pm * wm[l];
            }
        }
        return out;
    };
    return integrate_unit_delay(rhs, seed, static_cast<double>(s) + 2.0, t_end, h);
}

DdeSolution integrate_forward_transition_dde(const ClosedFormFamily& f, const SimplexVector& x0,
                                             int s, double t_end, double h,
                                             const std::vector<double>& deltas) {
    auto seed = [&f, &x0, s](double tau) { return f.tensor(s, tau, x0).entries(); };
    auto a = [&f, &x0, &deltas](double t) { return estimate_generator(f, t, x0, deltas); };
    auto traj = [&f, &x0](double tau) { return f.distribution(tau, x0); };
    return integrate_forward_transition_dde(f.n, seed, a, traj, s, t_end, h);
}

BackwardResidual backward_residual(const ClosedFormFamily& f, const SimplexVector& x0, double s,
                                   double t, double fd_delta,
                                   const std::vector<double>& deltas) {
    if (!(t > s + 2.0))
        throw std::invalid_argument("backward_residual: need t > s + 2");
    if (!(fd_delta > 0.0))
        throw std::invalid_argument("backward_residual: fd_delta must be positive");
    const int n = f.n;

    const GeneratorTensor a = estimate_generator(f, s + 1.0, x0, deltas);
    const SimplexVector y = f.distribution(s + 1.0, x0);
    const CubicTensor tail = f.tensor(s + 1.0, t, x0);
    const auto q = contract_pair(tail.entries(), n, y.probs());  // q[m,l]

    // Corrected linkage: the generator carries the free parent triple, the
    // forward tensor the summation triple.
    std::vector<double> rhs_corrected(static_cast<std::size_t>(n) * n * n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const std::size_t row = ((static_cast<std::size_t>(i) * n + j) * n + k) * n;
                for (int m = 0; m < n; ++m) {
                    const double am = a(i, j, k, m);
                    const double* qm = q.data() + static_cast<std::size_t>(m) * n;
                    for (int l = 0; l < n; ++l) rhs_corrected[row + l] -= am * qm[l];
                }
            }

    // As printed: both factors indexed by the summation triple, which makes
    // the right side independent of the free parents.
    std::vector<double> rhs_printed_l(n, 0.0);
    for (int m = 0; m < n; ++m)
        for (int g = 0; g < n; ++g)
            for (int d = 0; d < n; ++d) {
                const double wgt = y[g] * y[d];
                for (int l = 0; l < n; ++l)
                    rhs_printed_l[l] -= a(m, g, d, l) * wgt * tail(m, g, d, l);
            }

    auto residuals_at = [&](double delta) {
        CubicTensor up = f.tensor(s + delta, t, x0);
        CubicTensor dn = f.tensor(s - delta, t, x0);
        double worst_corr = 0.0, worst_printed = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        const std::size_t r = up.index(i, j, k, l);
                        const double dpds = (up.entries()[r] - dn.entries()[r]) / (2.0 * delta);
                        worst_corr = std::max(worst_corr, std::abs(dpds - rhs_corrected[r]));
                        worst_printed = std::max(worst_printed, std::abs(dpds - rhs_printed_l[l]));
                    }
        return std::make_pair(worst_corr, worst_printed);
    };

    const auto [r0c, r0p] = residuals_at(fd_delta);
    const auto [r1c, r1p] = residuals_at(fd_delta / 2.0);
    const auto [r2c, r2p] = residuals_at(fd_delta / 4.0);
    (void)r0p;
    (void)r1p;

    BackwardResidual out;
    out.corrected = r2c;
    out.printed = r2p;
    const double d01 = std::abs(r0c - r1c);
    const double d12 = std::abs(r1c - r2c);
    out.convergence_ratio = d12 > 0.0 ? d01 / d12 : (d01 == 0.0 ? 4.0 : 0.0);
    return out;
}

DistributionResidual distribution_dde_residual(const ClosedFormFamily& f,
                                               const SimplexVector& x0, double t,
                                               double fd_delta,
                                               const std::vector<double>& deltas) {
    if (!(t >= 2.0))
        throw std::invalid_argument("distribution_dde_residual: need t >= 2");
    if (!(fd_delta > 0.0) || t - fd_delta < 1.0)
        throw std::invalid_argument("distribution_dde_residual: fd_delta out of range");
    const int n = f.n;
    const GeneratorTensor a = estimate_generator(f, t, x0, deltas);
    const SimplexVector delayed = f.distribution(t - 1.0, x0);
    const auto rhs = contract_parents(a.entries, n, delayed.probs());

    auto residual_at = [&](double delta) {
        SimplexVector up = f.distribution(t + delta, x0);
        SimplexVector dn = f.distribution(t - delta, x0);
        double worst = 0.0;
        for (int k = 0; k < n; ++k) {
            const double dxdt = (up[k] - dn[k]) / (2.0 * delta);
            worst = std::max(worst, std::abs(dxdt - rhs[k]));
        }
        return worst;
    };

    const double r0 = residual_at(fd_delta);
    const double r1 = residual_at(fd_delta / 2.0);
    const double r2 = residual_at(fd_delta / 4.0);

    DistributionResidual out;
    out.residual = r2;
    const double d01 = std::abs(r0 - r1);
    const double d12 = std::abs(r1 - r2);
    out.convergence_ratio = d12 > 0.0 ? d01 / d12 : (d01 == 0.0 ? 4.0 : 0.0);
    return out;
}

}  // namespace cubic
