#include <benchmark/benchmark.h>

#include "preypred/analysis.hpp"
#include "preypred/simulate.hpp"

using namespace preypred;

namespace {

ModelParams reference_params() {
    ModelParams p;
    p.b = 0.4;
    p.d = 0.0;
    p.c = 0.005;
    p.B = 0.02;
    p.r = 2.0;
    p.D = 0.0;
    p.C = 0.04;
    return p;
}

void BM_flow(benchmark::State& state) {
    ModelParams p = reference_params();
    double t = 0.0;
    for (auto _ : state) {
        t += 0.1;
        if (t > 50.0) t = 0.1;
        benchmark::DoNotOptimize(flow(p, 7, 3.5, t));
    }
}
BENCHMARK(BM_flow);

void BM_hazard(benchmark::State& state) {
    ModelParams p = reference_params();
    State z{7, 3.5};
    double t = 0.0;
    for (auto _ : state) {
        t += 0.1;
        if (t > 50.0) t = 0.1;
        benchmark::DoNotOptimize(hazard(p, z, t));
    }
}
BENCHMARK(BM_hazard);

void BM_invert_hazard(benchmark::State& state) {
    ModelParams p = reference_params();
    State z{7, 3.5};
    double target = 0.0;
    for (auto _ : state) {
        target += 0.37;
        if (target > 40.0) target = 0.37;
        benchmark::DoNotOptimize(invert_hazard(p, z, target));
    }
}
BENCHMARK(BM_invert_hazard);

void BM_next_jump_thinning(benchmark::State& state) {
    ModelParams p = reference_params();
    State z{7, 3.5};
    RngStream rng(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(next_jump_thinning(p, z, rng));
}
BENCHMARK(BM_next_jump_thinning);

void BM_next_jump_inversion(benchmark::State& state) {
    ModelParams p = reference_params();
    State z{7, 3.5};
    RngStream rng(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(next_jump_inversion(p, z, rng));
}
BENCHMARK(BM_next_jump_inversion);

void BM_pdmp_path(benchmark::State& state) {
    ModelParams p = reference_params();
    p.epsilon = 1.0 / static_cast<double>(state.range(0));
    std::uint64_t replica = 0;
    for (auto _ : state) {
        RngStream rng(123, replica++);
        benchmark::DoNotOptimize(simulate_pdmp_terminal(p, State{5, 5.0}, 100.0, rng));
    }
}
BENCHMARK(BM_pdmp_path)->Arg(1)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_ibm_path(benchmark::State& state) {
    ModelParams p = reference_params();
    const std::int64_t K = state.range(0);
    std::uint64_t replica = 0;
    for (auto _ : state) {
        RngStream rng(321, replica++);
        benchmark::DoNotOptimize(simulate_ibm_terminal(p, K, 5, 5 * K, 5.0, rng));
    }
}
BENCHMARK(BM_ibm_path)->Arg(100)->Arg(500)->Unit(benchmark::kMicrosecond);

void BM_averaged_path(benchmark::State& state) {
    ModelParams p = reference_params();
    std::uint64_t replica = 0;
    for (auto _ : state) {
        RngStream rng(213, replica++);
        benchmark::DoNotOptimize(simulate_averaged_terminal(p, 5, 100.0, rng));
    }
}
BENCHMARK(BM_averaged_path)->Unit(benchmark::kMicrosecond);

void BM_occupation(benchmark::State& state) {
    ModelParams p = reference_params();
    RngStream rng(7, 0);
    Trajectory traj = simulate_pdmp(p, State{5, 5.0}, 100.0, rng);
    Hist2D skeleton = make_hstar_hist(p, 1, 60);
    for (auto _ : state)
        benchmark::DoNotOptimize(occupation_measure(traj, 0.0, 100.0, skeleton.h_edges));
}
BENCHMARK(BM_occupation)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
