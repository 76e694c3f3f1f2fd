#include <benchmark/benchmark.h>

#include <random>

#include "cubicproc/closed_form.hpp"
#include "cubicproc/evolve.hpp"
#include "cubicproc/kernel.hpp"
#include "cubicproc/monte_carlo.hpp"
#include "cubicproc/quadrature.hpp"
#include "cubicproc/transition_family.hpp"

namespace {

cubic::CubicTensor random_valid_tensor(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> entries(static_cast<std::size_t>(n) * n * n * n);
    for (double& v : entries) v = dist(rng);
    cubic::CubicTensor raw = cubic::symmetrize_tensor(cubic::CubicTensor(n, entries));
    std::vector<double> normalized = raw.entries();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double sum = 0.0;
                for (int l = 0; l < n; ++l) sum += raw(i, j, k, l);
                for (int l = 0; l < n; ++l) normalized[raw.index(i, j, k, l)] /= sum;
            }
    return cubic::CubicTensor(n, std::move(normalized));
}

void BM_Evolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto tensor = random_valid_tensor(n, 7);
    const auto x0 = cubic::SimplexVector::uniform(n);
    for (auto _ : state) {
        auto y = cubic::evolve(tensor, x0);
        benchmark::DoNotOptimize(y);
    }
}
BENCHMARK(BM_Evolve)->Arg(3)->Arg(4);

void BM_ComposeChain(benchmark::State& state) {
    const auto tensor = random_valid_tensor(3, 11);
    const auto x0 = cubic::SimplexVector::uniform(3);
    for (auto _ : state) {
        cubic::TransitionFamily family(tensor, x0, 16);
        benchmark::DoNotOptimize(family.transition(0, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_ComposeChain)->Arg(4)->Arg(8);

void BM_MonteCarloGeneration(benchmark::State& state) {
    const auto tensor = random_valid_tensor(3, 13);
    const auto x0 = cubic::SimplexVector::uniform(3);
    for (auto _ : state) {
        auto gens = cubic::monte_carlo_trajectory(tensor, x0, 1, state.range(0), 42);
        benchmark::DoNotOptimize(gens);
    }
}
BENCHMARK(BM_MonteCarloGeneration)->Arg(10000)->Arg(100000);

void BM_GaussMomentBattery(benchmark::State& state) {
    const auto rule = cubic::composite_rule(-8.0, 8.0, static_cast<int>(state.range(0)), 16);
    for (auto _ : state) {
        double acc = 0.0;
        for (int moment = 0; moment <= 4; ++moment)
            acc += cubic::integrate(
                [moment](double x) {
                    double p = 1.0;
                    for (int i = 0; i < moment; ++i) p *= x;
                    return p * std::exp(-0.5 * x * x) * 0.3989422804014327;
                },
                rule);
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_GaussMomentBattery)->Arg(16)->Arg(32);

void BM_EvolvePointMassMeasure(benchmark::State& state) {
    const auto kernel = cubic::example2_kernel();
    const auto m0 = cubic::point_mass_measure(0.0);
    cubic::GridSpec spec;
    spec.panels = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto evolved = cubic::evolve_measure_grid(kernel, m0, 0.0, 2.0, spec);
        benchmark::DoNotOptimize(evolved);
    }
}
BENCHMARK(BM_EvolvePointMassMeasure)->Arg(20)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
