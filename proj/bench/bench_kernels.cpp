// Serial vs OpenMP vs pruned kernels on desk-scale clouds (window half-width 128).

#include "bhl/attractor.hpp"
#include "bhl/experiment_config.hpp"
#include "bhl/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace bhl;

namespace {

constexpr Index kHalfWidth = 128;

// Two independent samples of the absorbing ball.
std::pair<PointCloud, PointCloud> spread_pair(std::size_t n) {
    const Space s = Space::window(kHalfWidth);
    return {sample_ball(1.0, s, n, 1), sample_ball(1.0, s, n, 2)};
}

// Two clouds near one state, as after stabilization.
std::pair<PointCloud, PointCloud> tight_pair(std::size_t n) {
    const Space s = Space::window(kHalfWidth);
    PointCloud a = sample_ball(1e-6, s, n, 3);
    PointCloud b = sample_ball(1e-6, s, n, 4);
    for (auto* c : {&a, &b})
        for (auto& p : c->points) p[kHalfWidth] += 0.06;
    return {a, b};
}

template <double (*Kernel)(std::span<const kernels::Point>, std::span<const kernels::Point>)>
void semi_spread(benchmark::State& st) {
    const auto [a, b] = spread_pair(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(Kernel(a.points, b.points));
    st.SetComplexityN(st.range(0));
}

template <double (*Kernel)(std::span<const kernels::Point>, std::span<const kernels::Point>)>
void semi_tight(benchmark::State& st) {
    const auto [a, b] = tight_pair(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(Kernel(a.points, b.points));
}

CloudStepper stepper() {
    const ExperimentConfig cfg = default_config();
    return implicit_euler_stepper(cfg.params, step_config(cfg, 0.01), Space::window(kHalfWidth));
}

template <void (*Evolve)(std::span<kernels::Point>, const kernels::Advance&, std::size_t)>
void evolve_cloud(benchmark::State& st) {
    const CloudStepper s = stepper();
    const PointCloud init = sample_ball(1.0, s.space, static_cast<std::size_t>(st.range(0)), 5);
    for (auto _ : st) {
        st.PauseTiming();
        PointCloud c = init;
        st.ResumeTiming();
        Evolve(c.points, s.advance, 5);
        benchmark::DoNotOptimize(c.points.data());
    }
}

} // namespace

BENCHMARK(semi_spread<kernels::semi_hausdorff_serial>)->Name("semi_hausdorff/spread/serial")->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(semi_spread<kernels::semi_hausdorff_parallel>)->Name("semi_hausdorff/spread/parallel")->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(semi_spread<kernels::semi_hausdorff_pruned>)->Name("semi_hausdorff/spread/pruned")->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(semi_tight<kernels::semi_hausdorff_serial>)->Name("semi_hausdorff/tight/serial")->Arg(256);
BENCHMARK(semi_tight<kernels::semi_hausdorff_parallel>)->Name("semi_hausdorff/tight/parallel")->Arg(256);
BENCHMARK(semi_tight<kernels::semi_hausdorff_pruned>)->Name("semi_hausdorff/tight/pruned")->Arg(256);
BENCHMARK(evolve_cloud<kernels::evolve_serial>)->Name("evolve/serial")->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(evolve_cloud<kernels::evolve_parallel>)->Name("evolve/parallel")->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
