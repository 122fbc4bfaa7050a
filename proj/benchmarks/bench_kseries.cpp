#include <benchmark/benchmark.h>

#include <vector>

#include "kseries/distribution.hpp"
#include "kseries/estimator.hpp"
#include "kseries/gof.hpp"
#include "kseries/loopsim.hpp"
#include "kseries/moment_sources.hpp"
#include "kseries/orthobasis.hpp"
#include "kseries/rng.hpp"

using namespace kseries;

namespace {

std::vector<double> exact_moments(const Distribution& d, int n) {
    std::vector<double> m;
    m.reserve(std::size_t(n) + 1);
    for (int k = 0; k <= n; ++k) m.push_back(d.raw_moment(k));
    return m;
}

// Small worked example: 2 moments, uniform reference.  The library's headline
// latency target is < 1 ms for this call.
void BM_fit_small(benchmark::State& state) {
    MomentVector m({1.0, 0.418023, 0.254070});
    auto ref = Distribution::uniform(0, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(fit(m, ref));
}
BENCHMARK(BM_fit_small);

void BM_fit_degree(benchmark::State& state) {
    int n = int(state.range(0));
    auto target = Distribution::truncated_exponential(2.0 / 3.0, 0, 4);
    MomentVector m(exact_moments(target, n));
    auto ref = Distribution::uniform(0, 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(fit(m, ref));
}
BENCHMARK(BM_fit_degree)->Arg(2)->Arg(6)->Arg(10);

void BM_gram_schmidt(benchmark::State& state) {
    int n = int(state.range(0));
    auto ref = Distribution::truncated_normal(0.71721, 0.61614, -2, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(OrthonormalBasis::gram_schmidt(ref, n));
}
BENCHMARK(BM_gram_schmidt)->Arg(2)->Arg(6)->Arg(10);

void BM_fit_bivariate(benchmark::State& state) {
    std::vector<double> vals{1,       1.99556, 4.96894, 0.71721, 1.43124,
                             3.56379, 1.13054, 2.25606, 5.61757};
    MomentTensor m({2, 2}, vals);
    std::vector<Distribution> refs{
        Distribution::truncated_normal(0.71721, 0.61614, -2, 2),
        Distribution::truncated_normal(1.99556, 0.98667, -4, 5)};
    for (auto _ : state)
        benchmark::DoNotOptimize(fit_multivariate(m, refs));
}
BENCHMARK(BM_fit_bivariate);

void BM_simulate(benchmark::State& state) {
    SimulationSpec spec;
    spec.program = parse_loop_program(
        "x := 0\nwhile (True):\n    u := Uniform(0, 1)\n    x := x + u\nend\n");
    spec.iterations = 10;
    spec.replications = std::int64_t(state.range(0));
    spec.seed = 42;
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate(spec));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_simulate)->Arg(1000)->Arg(100000);

void BM_sample_moments(benchmark::State& state) {
    RngStream rng(7, 0);
    std::vector<std::vector<double>> data;
    data.reserve(std::size_t(state.range(0)));
    for (std::int64_t i = 0; i < state.range(0); ++i)
        data.push_back({rng.uniform01() + rng.uniform01()});
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_moments(data, {6}));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_sample_moments)->Arg(10000)->Arg(1000000);

void BM_ks_two_sample(benchmark::State& state) {
    RngStream rng(11, 0);
    std::vector<double> s1, s2;
    for (int i = 0; i < 1000; ++i) s1.push_back(rng.uniform01());
    for (int i = 0; i < 1000; ++i) s2.push_back(rng.uniform01());
    for (auto _ : state)
        benchmark::DoNotOptimize(ks_two_sample(s1, s2));
}
BENCHMARK(BM_ks_two_sample);

void BM_energy_two_sample(benchmark::State& state) {
    RngStream rng(13, 0);
    std::vector<std::vector<double>> s1, s2;
    for (int i = 0; i < 200; ++i) s1.push_back({rng.uniform01(), rng.uniform01()});
    for (int i = 0; i < 200; ++i) s2.push_back({rng.uniform01(), rng.uniform01()});
    for (auto _ : state) {
        RngStream perm(17, 0);
        benchmark::DoNotOptimize(energy_two_sample(s1, s2, 199, perm));
    }
}
BENCHMARK(BM_energy_two_sample);

}  // namespace

BENCHMARK_MAIN();
