#pragma once

// Shared helpers for the test suites: deterministic random inputs and
// independent brute-force oracles. The oracles deliberately use the naive
// summation order so they share no code path with the library.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cubicproc/cubic_tensor.hpp"
#include "cubicproc/simplex.hpp"

namespace testsupport {

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline cubic::SimplexVector random_simplex(int n, std::mt19937_64& rng) {
    std::vector<double> p(n);
    double sum = 0.0;
    for (double& v : p) {
        v = -std::log(1.0 - uniform01(rng));  // exponential -> Dirichlet(1,..,1)
        sum += v;
    }
    for (double& v : p) v /= sum;
    return cubic::SimplexVector::validated(std::move(p), 1e-9);
}

inline cubic::CubicTensor random_valid_tensor(int n, std::mt19937_64& rng) {
    std::vector<double> entries(static_cast<std::size_t>(n) * n * n * n);
    for (double& v : entries) v = uniform01(rng) + 1e-3;
    cubic::CubicTensor symmetric = cubic::symmetrize_tensor(cubic::CubicTensor(n, entries));
    std::vector<double> normalized = symmetric.entries();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double sum = 0.0;
                for (int l = 0; l < n; ++l) sum += symmetric(i, j, k, l);
                for (int l = 0; l < n; ++l) normalized[symmetric.index(i, j, k, l)] /= sum;
            }
    return cubic::CubicTensor(n, std::move(normalized));
}

// y_l = sum over all n^3 parent triples, one term at a time.
inline std::vector<double> brute_force_evolve(const cubic::CubicTensor& p,
                                              const std::vector<double>& x) {
    const int n = p.size();
    std::vector<double> y(n, 0.0);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) y[l] += p(i, j, k, l) * x[i] * x[j] * x[k];
    return y;
}

// Composition of two transition tensors through the intermediate
// distribution, as a direct sum over all (m, g, d) per output entry.
inline cubic::CubicTensor brute_force_compose(const cubic::CubicTensor& head,
                                              const cubic::CubicTensor& tail,
                                              const std::vector<double>& y) {
    const int n = head.size();
    std::vector<double> out(head.entries().size(), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double acc = 0.0;
                    for (int m = 0; m < n; ++m)
                        for (int g = 0; g < n; ++g)
                            for (int d = 0; d < n; ++d)
                                acc += head(i, j, k, m) * tail(m, g, d, l) * y[g] * y[d];
                    out[head.index(i, j, k, l)] = acc;
                }
    return cubic::CubicTensor(n, std::move(out));
}

// Analytic generator of the three-state mixing family at epsilon = 0:
// triply-equal rows a(iii,i) = ln2 (x_i - 1), a(iii,l) = ln2 x_l, and
// mixed rows a(.,l) = ln2 (x_l - 1/3).
inline double example1_generator_eps0(int m, int g, int d, int l,
                                      const cubic::SimplexVector& x0) {
    const double ln2 = std::numbers::ln2;
    if (m == g && g == d) return l == m ? ln2 * (x0[l] - 1.0) : ln2 * x0[l];
    return ln2 * (x0[l] - 1.0 / 3.0);
}

inline double gauss_pdf(double x, double mean, double variance) {
    return std::exp(-(x - mean) * (x - mean) / (2.0 * variance)) /
           std::sqrt(2.0 * std::numbers::pi * variance);
}

}  // namespace testsupport
