#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "telescopia/evaluator.hpp"
#include "telescopia/generator.hpp"
#include "telescopia/verify.hpp"
#include "telescopia/zeta_chain.hpp"

namespace ts = telescopia;
using ts::Scalar;

namespace {

void BM_PartialProduct(benchmark::State& state) {
    const auto& e = ts::find_identity("PROD-BASIC");
    ts::ParamSet p;
    p.s = {2.0, 0.0};
    const std::int64_t N = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ts::partial_product(e, p, N));
    }
    state.SetItemsProcessed(state.iterations() * N);
}
BENCHMARK(BM_PartialProduct)->Range(64, 16384);

void BM_PartialSum(benchmark::State& state) {
    const auto& e = ts::find_identity("SUM-BASIC");
    ts::ParamSet p;
    p.s = {0.5, 0.0};
    const std::int64_t N = state.range(0);
    const bool compensated = state.range(1) != 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ts::partial_sum(e, p, N, 1e-14, compensated));
    }
    state.SetItemsProcessed(state.iterations() * N);
}
BENCHMARK(BM_PartialSum)
    ->Args({1024, 0})
    ->Args({1024, 1})
    ->Args({16384, 0})
    ->Args({16384, 1});

void BM_ExtrapolateLimit(benchmark::State& state) {
    std::vector<Scalar> checkpoints;
    for (int i = 0; i < 14; ++i) {
        const double N = 64.0 * std::pow(2.0, i);
        checkpoints.emplace_back(0.75 - 0.4 / N + 1.3 / (N * N), 0.0);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(ts::extrapolate_limit(checkpoints));
    }
}
BENCHMARK(BM_ExtrapolateLimit);

void BM_EvaluateToTolerance(benchmark::State& state) {
    ts::EvaluationRequest req;
    req.identity = &ts::find_identity("SUM-BASIC");
    req.params.s = {2.0, 0.0};
    req.mode = ts::EvalMode::to_tolerance;
    req.policy.rel_tol = 1e-10;
    req.compensated = true;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ts::evaluate(req));
    }
}
BENCHMARK(BM_EvaluateToTolerance);

void BM_ZetaInt(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ts::zeta_int(n, 1e-12));
    }
}
BENCHMARK(BM_ZetaInt)->Arg(2)->Arg(5);

void BM_SynthesizedPartial(benchmark::State& state) {
    const auto gen = ts::synthesize(ts::find_preset("x-arctan").f, {1.0, 0.0});
    const std::int64_t N = state.range(0);
    for (auto _ : state) {
        Scalar acc{1.0, 0.0};
        for (std::int64_t k = 2; k <= N; ++k) acc *= gen.term(k, {2.0, 0.0});
        benchmark::DoNotOptimize(acc * gen.beta);
    }
    state.SetItemsProcessed(state.iterations() * N);
}
BENCHMARK(BM_SynthesizedPartial)->Range(64, 4096);

void BM_RegressionSuite(benchmark::State& state) {
    ts::RegressionOptions opts;
    opts.threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ts::regression_suite(opts));
    }
}
BENCHMARK(BM_RegressionSuite)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
