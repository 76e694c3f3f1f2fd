#include "cubicproc/evolve.hpp"

#include <stdexcept>

namespace cubic {

std::vector<double> contract_parents(const std::vector<double>& entries, int n,
                                     const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("contract_parents: dimension mismatch");
    const std::size_t n2 = static_cast<std::size_t>(n) * n;
    const std::size_t n3 = n2 * n;

    // Stage 1: t1[j,k,l] = sum_i x_i p(i,j,k,l)
    std::vector<double> t1(n3, 0.0);
    for (int i = 0; i < n; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        const double* row = entries.data() + static_cast<std::size_t>(i) * n3;
        for (std::size_t r = 0; r < n3; ++r) t1[r] += xi * row[r];
    }
    // Stage 2: t2[k,l] = sum_j x_j t1[j,k,l]
    std::vector<double> t2(n2, 0.0);
    for (int j = 0; j < n; ++j) {
        const double xj = x[j];
        if (xj == 0.0) continue;
        const double* row = t1.data() + static_cast<std::size_t>(j) * n2;
        for (std::size_t r = 0; r < n2; ++r) t2[r] += xj * row[r];
    }
    // Stage 3: y[l] = sum_k x_k t2[k,l]
    std::vector<double> y(n, 0.0);
    for (int k = 0; k < n; ++k) {
        const double xk = x[k];
        if (xk == 0.0) continue;
        const double* row = t2.data() + static_cast<std::size_t>(k) * n;
        for (int l = 0; l < n; ++l) y[l] += xk * row[l];
    }
    return y;
}

std::vector<double> contract_pair(const std::vector<double>& entries, int n,
                                  const std::vector<double>& y) {
    if (static_cast<int>(y.size()) != n)
        throw std::invalid_argument("contract_pair: dimension mismatch");
    const std::size_t n2 = static_cast<std::size_t>(n) * n;
    std::vector<double> q(n2, 0.0);
    for (int m = 0; m < n; ++m)
        for (int g = 0; g < n; ++g) {
            const double yg = y[g];
            if (yg == 0.0) continue;
            for (int d = 0; d < n; ++d) {
                const double wgt = yg * y[d];
                if (wgt == 0.0) continue;
                const double* row = entries.data() + ((static_cast<std::size_t>(m) * n + g) * n + d) * n;
                double* out = q.data() + static_cast<std::size_t>(m) * n;
                for (int l = 0; l < n; ++l) out[l] += wgt * row[l];
            }
        }
    return q;
}

SimplexVector evolve(const CubicTensor& law, const SimplexVector& x) {
    if (law.size() != x.size())
        throw std::invalid_argument("evolve: tensor and distribution sizes differ");
    return SimplexVector::unchecked(contract_parents(law.entries(), law.size(), x.probs()));
}

Trajectory iterate(const CubicTensor& law, const SimplexVector& x0, int horizon,
                   int start_time) {
    if (horizon < 0) throw std::invalid_argument("iterate: horizon must be >= 0");
    Trajectory traj;
    traj.start_time = start_time;
    traj.states.reserve(static_cast<std::size_t>(horizon) + 1);
    traj.states.push_back(x0);
    for (int k = 0; k < horizon; ++k) traj.states.push_back(evolve(law, traj.states.back()));
    return traj;
}

}  // namespace cubic
