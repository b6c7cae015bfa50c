#include <random>

#include <benchmark/benchmark.h>

#include "ssdt/edge.hpp"
#include "ssdt/master.hpp"
#include "ssdt/montecarlo.hpp"
#include "ssdt/stieltjes.hpp"

namespace {

ssdt::NoiseModel make_model(std::int64_t n) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(n));
    return ssdt::mc::random_model(static_cast<std::size_t>(n / 2), static_cast<std::size_t>(n), 0.5, 1.0, 2.0, rng);
}

void BM_FKernel(benchmark::State& state) {
    const ssdt::NoiseModel model = make_model(state.range(0));
    const double lambda = 2.0 * ssdt::ssdt(model).lambda_star;
    const double e = ssdt::e_of_lambda(model, lambda).e;
    for (auto _ : state) benchmark::DoNotOptimize(ssdt::f_eval(model, lambda, e));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FKernel)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity(benchmark::oN);

void BM_Edge(benchmark::State& state) {
    const ssdt::NoiseModel model = make_model(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ssdt::ssdt(model).lambda_star);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Edge)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity(benchmark::oN)->Unit(benchmark::kMillisecond);

void BM_StieltjesPoint(benchmark::State& state) {
    const ssdt::NoiseModel model = make_model(state.range(0));
    const ssdt::StieltjesEvaluator evaluator(model);
    const double lambda = evaluator.lambda_star() + 5.0;
    for (auto _ : state) benchmark::DoNotOptimize(evaluator.point(lambda).s);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_StieltjesPoint)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity(benchmark::oN);

}  // namespace
BENCHMARK_MAIN();
