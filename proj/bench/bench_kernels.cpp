// OpenMP kernels against the serial reference implementation.
#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>
#include <random>
#include <vector>

#include "pfscale/energy.hpp"
#include "pfscale/hessian2d.hpp"
#include "pfscale/reference.hpp"

using namespace pfscale;

namespace {

ScalarField1D field_1d(int n) {
    const Grid1D g(-1.0, 1.0, n);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> v(g.nodes());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::tanh(g.node(i) * 8.0) + 0.01 * U(rng);
    return ScalarField1D(g, v);
}

ScalarField2D field_2d(int n) {
    const Grid2D grid = make_rectangle_grid(0.0, 0.0, 2.0, 1.0, n);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> v(grid.node_count());
    for (double& x : v) x = U(rng);
    return ScalarField2D(grid, v);
}

template <class Fn>
void run_1d(benchmark::State& state, Fn fn) {
    const auto f = field_1d(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(fn(f));
    state.counters["threads"] = omp_get_max_threads();
}

template <class Fn>
void run_2d(benchmark::State& state, Fn fn) {
    const auto u = field_2d(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(fn(u));
    state.counters["threads"] = omp_get_max_threads();
}

void BM_h12(benchmark::State& s) { run_1d(s, [](const auto& f) { return h12_seminorm(f); }); }
void BM_h12_reference(benchmark::State& s) { run_1d(s, [](const auto& f) { return reference::h12_seminorm(f); }); }
void BM_derivative(benchmark::State& s) { run_1d(s, [](const auto& f) { return derivative_seminorm(f); }); }
void BM_derivative_reference(benchmark::State& s) {
    run_1d(s, [](const auto& f) { return reference::derivative_seminorm(f); });
}
void BM_hessian2d(benchmark::State& s) { run_2d(s, [](const auto& u) { return hessian_energy_2d(u); }); }
// operator assembled once, as inside the minimizer
void BM_hessian2d_prebuilt(benchmark::State& s) {
    const auto u = field_2d(static_cast<int>(s.range(0)));
    const HessianOperator op(u.grid());
    std::vector<double> grad(u.values().size());
    for (auto _ : s) {
        benchmark::DoNotOptimize(op.energy(u.values()));
        op.gradient(u.values(), grad);
        benchmark::ClobberMemory();
    }
    s.counters["threads"] = omp_get_max_threads();
}
void BM_hessian2d_reference(benchmark::State& s) {
    run_2d(s, [](const auto& u) { return reference::hessian_energy_2d(u); });
}

}  // namespace

BENCHMARK(BM_h12)->RangeMultiplier(2)->Range(256, 2048);
BENCHMARK(BM_h12_reference)->RangeMultiplier(2)->Range(256, 2048);
BENCHMARK(BM_derivative)->RangeMultiplier(2)->Range(256, 2048);
BENCHMARK(BM_derivative_reference)->RangeMultiplier(2)->Range(256, 2048);
BENCHMARK(BM_hessian2d)->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(BM_hessian2d_prebuilt)->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(BM_hessian2d_reference)->RangeMultiplier(2)->Range(64, 512);

BENCHMARK_MAIN();
