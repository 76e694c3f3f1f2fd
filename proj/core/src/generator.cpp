#include "cubicproc/generator.hpp"

#include <cmath>
#include <stdexcept>

namespace cubic {

GeneratorTensor estimate_generator(const ClosedFormFamily& f, double t, const SimplexVector& x0,
                                   const std::vector<double>& deltas) {
    if (t < 1.0 - 1e-12)
        throw std::invalid_argument("estimate_generator: need t >= 1 so t-1 is a valid start");
    if (x0.size() != f.n)
        throw std::invalid_argument("estimate_generator: x0 dimension mismatch");
    if (deltas.size() < 2)
        throw std::invalid_argument("estimate_generator: need at least 2 deltas");

    const int n = f.n;
    GeneratorTensor a;
    a.n = n;
    a.time = t;
    a.entries.resize(static_cast<std::size_t>(n) * n * n * n);
    a.estimated_error.resize(a.entries.size());

    for (int m = 0; m < n; ++m)
        for (int g = 0; g < n; ++g)
            for (int d = 0; d < n; ++d)
                for (int l = 0; l < n; ++l) {
                    const double base = f(0.0, 1.0, m, g, d, l, x0);
                    auto quotient = [&](double delta) {
                        return (f(t - 1.0, t + delta, m, g, d, l, x0) - base) / delta;
                    };
                    LimitEstimate est = extrapolate_limit(quotient, deltas);
                    a.entries[a.index(m, g, d, l)] = est.value;
                    a.estimated_error[a.index(m, g, d, l)] = est.error;
                }
    return a;
}

double generator_row_sum_defect(const GeneratorTensor& a) {
    double worst = 0.0;
    for (int m = 0; m < a.n; ++m)
        for (int g = 0; g < a.n; ++g)
            for (int d = 0; d < a.n; ++d) {
                double sum = 0.0;
                for (int l = 0; l < a.n; ++l) sum += a(m, g, d, l);
                worst = std::max(worst, std::abs(sum));
            }
    return worst;
}

double generator_symmetry_defect(const GeneratorTensor& a) {
    static constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                         {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    double worst = 0.0;
    const int n = a.n;
    for (int m = 0; m < n; ++m)
        for (int g = m; g < n; ++g)
            for (int d = g; d < n; ++d) {
                const int idx[3] = {m, g, d};
                for (int l = 0; l < n; ++l) {
                    const double ref = a(m, g, d, l);
                    for (const auto& p : kPerms)
                        worst = std::max(worst,
                                         std::abs(a(idx[p[0]], idx[p[1]], idx[p[2]], l) - ref));
                }
            }
    return worst;
}

double generator_max_error(const GeneratorTensor& a) {
    double worst = 0.0;
    for (double e : a.estimated_error) worst = std::max(worst, e);
    return worst;
}

}  // namespace cubic
