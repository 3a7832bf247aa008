#include "quadprime/expsum.hpp"
#include "quadprime/moments.hpp"
#include "quadprime/sieve.hpp"
#include "quadprime/singular.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_LambdaTable(benchmark::State& state) {
    const auto hi = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(quadprime::sieve::build_lambda_table(1, hi));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LambdaTable)->Arg(1 << 20)->Arg(1 << 24)->Unit(benchmark::kMillisecond);

void BM_PsiRange(benchmark::State& state) {
    const auto x = static_cast<std::uint64_t>(state.range(0));
    const auto lambda = quadprime::sieve::build_lambda_table(1, 2 * x * x);
    for (auto _ : state)
        benchmark::DoNotOptimize(quadprime::moments::psi_range(x, x * x, lambda));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0) * state.range(0));
}
BENCHMARK(BM_PsiRange)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_EulerRange(benchmark::State& state) {
    const auto y = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(quadprime::singular::singular_series_euler_range(1, y, 10'000));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EulerRange)->Arg(10'000)->Arg(160'000)->Unit(benchmark::kMillisecond);

void BM_LMethod(benchmark::State& state) {
    const auto k = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(quadprime::singular::singular_series_lmethod(k, 1e-6));
}
BENCHMARK(BM_LMethod)->Arg(1)->Arg(1000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_PvCheck(benchmark::State& state) {
    const auto q = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(quadprime::expsum::pv_check(q));
}
BENCHMARK(BM_PvCheck)->Arg(101)->Arg(499)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
