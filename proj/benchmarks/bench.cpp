#include <benchmark/benchmark.h>

#include "sl/eigen.hpp"
#include "sl/lemma.hpp"
#include "sl/prufer.hpp"

namespace {

sl::SLProblem test_problem() {
    sl::PiecewiseFn one = sl::PiecewiseFn::constant(0, 1, 1);
    sl::PiecewiseFn q({0, 0.2, 0.55, 1}, {1.5, -2.0, 0.75});
    sl::PiecewiseFn w({0, 0.3, 0.7, 1}, {0.6, 1.0, 1.8});
    return sl::SLProblem(one, q, w, 0.0, 0.0);
}

void BM_MissDistanceTransfer(benchmark::State& state) {
    auto prob = test_problem();
    const double lambda = static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(sl::miss_distance(prob, 5, lambda, sl::Backend::transfer));
}
BENCHMARK(BM_MissDistanceTransfer)->Arg(100)->Arg(10000)->Arg(1000000);

void BM_MissDistanceRK(benchmark::State& state) {
    auto prob = test_problem();
    const double lambda = static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(sl::miss_distance(prob, 5, lambda, sl::Backend::prufer_rk, 1e-10));
}
BENCHMARK(BM_MissDistanceRK)->Arg(100)->Arg(10000)->Arg(1000000);

void BM_Eigenvalue(benchmark::State& state) {
    auto prob = test_problem();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sl::eigenvalue(prob, n, 1e-10));
}
BENCHMARK(BM_Eigenvalue)->Arg(1)->Arg(10)->Arg(100);

void BM_EigenpairsUpTo(benchmark::State& state) {
    auto prob = test_problem();
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sl::eigenpairs_up_to(prob, N, 1e-9));
}
BENCHMARK(BM_EigenpairsUpTo)->Arg(10)->Arg(50);

void BM_OscillatoryIntegrals(benchmark::State& state) {
    sl::PiecewiseFn g({0, 0.4, 1}, {2.0, 0.5});
    sl::PiecewiseFn w({0, 0.3, 0.7, 1}, {0.6, 1.0, 1.8});
    const double lambda = static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(sl::oscillatory_integrals(w, g, lambda, 1.0));
}
BENCHMARK(BM_OscillatoryIntegrals)->Arg(10000)->Arg(1000000);

}  // namespace

BENCHMARK_MAIN();
