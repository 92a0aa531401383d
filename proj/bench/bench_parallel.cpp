// Serial reference vs OpenMP kernels on the three parallel hot loops.

#include <benchmark/benchmark.h>

#include "nmwit/choi.hpp"
#include "nmwit/geometry.hpp"
#include "nmwit/witness.hpp"

using namespace nmwit;

namespace {

Exec mode(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void BM_Scan(benchmark::State& state) {
    const auto gen = random_markovian(3, 9, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(scan(gen, 0.0, 1.0, 2000, 1e-3, 1e-5, mode(state)));
}

void BM_VerifyWitness(benchmark::State& state) {
    const double eps = 1e-3;
    const auto cn = first_order_choi(random_nm_generator(2, eps, 3), 0.0, eps);
    const auto w = theorem3_witness(cn, nearest_mcs_full_gksl(cn, 2, eps).choi_star);
    for (auto _ : state) benchmark::DoNotOptimize(verify_witness(w, 2, eps, 5000, 9, mode(state)));
}

void BM_ConvexityProbe(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(convexity_probe(2, 1e-4, 5000, 5, mode(state)));
}

}  // namespace

BENCHMARK(BM_Scan)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_VerifyWitness)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ConvexityProbe)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
