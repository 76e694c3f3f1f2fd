#include "cubicproc/monte_carlo.hpp"

#include <random>
#include <stdexcept>

namespace cubic {

namespace {

// 53 random bits -> [0, 1). Spelled out so the stream depends only on the
// mt19937_64 sequence, not on distribution internals.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int sample_cdf(const std::vector<double>& cdf, double u) {
    int lo = 0, hi = static_cast<int>(cdf.size()) - 1;
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (u < cdf[mid])
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

std::vector<double> cumulative(const double* p, int n) {
    std::vector<double> cdf(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += p[i];
        cdf[i] = acc;
    }
    cdf[n - 1] = 1.0;  // guard against rounding at the top
    return cdf;
}

}  // namespace

std::vector<SimplexVector> monte_carlo_trajectory(const CubicTensor& law,
                                                  const SimplexVector& x0, int horizon,
                                                  long population, std::uint64_t seed) {
    const int n = law.size();
    if (x0.size() != n)
        throw std::invalid_argument("monte_carlo_trajectory: dimension mismatch");
    if (population < 1)
        throw std::invalid_argument("monte_carlo_trajectory: population must be >= 1");
    if (horizon < 0) throw std::invalid_argument("monte_carlo_trajectory: horizon must be >= 0");
    if (!validate_tensor(law).passed())
        throw std::invalid_argument("monte_carlo_trajectory: invalid tensor");

    std::mt19937_64 rng(seed);

    // Offspring law per parent triple, as cumulative rows.
    std::vector<std::vector<double>> row_cdf(static_cast<std::size_t>(n) * n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                row_cdf[(static_cast<std::size_t>(i) * n + j) * n + k] =
                    cumulative(&law.entries()[law.index(i, j, k, 0)], n);

    std::vector<SimplexVector> generations;
    generations.reserve(static_cast<std::size_t>(horizon) + 1);

    std::vector<long> counts(n, 0);
    {
        auto cdf = cumulative(x0.probs().data(), n);
        for (long p = 0; p < population; ++p) ++counts[sample_cdf(cdf, uniform01(rng))];
    }
    auto freq = [&](const std::vector<long>& c) {
        std::vector<double> f(n);
        for (int i = 0; i < n; ++i) f[i] = static_cast<double>(c[i]) / population;
        return SimplexVector::unchecked(std::move(f));
    };
    generations.push_back(freq(counts));

    for (int g = 0; g < horizon; ++g) {
        auto parent_cdf = cumulative(generations.back().probs().data(), n);
        std::vector<long> next(n, 0);
        for (long p = 0; p < population; ++p) {
            int i = sample_cdf(parent_cdf, uniform01(rng));
            int j = sample_cdf(parent_cdf, uniform01(rng));
            int k = sample_cdf(parent_cdf, uniform01(rng));
            const auto& cdf = row_cdf[(static_cast<std::size_t>(i) * n + j) * n + k];
            ++next[sample_cdf(cdf, uniform01(rng))];
        }
        counts = next;
        generations.push_back(freq(counts));
    }
    return generations;
}

}  // namespace cubic
