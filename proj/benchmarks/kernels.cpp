#include <benchmark/benchmark.h>

#include <cmath>

#include "muskat/hankel.hpp"
#include "muskat/nonlinear.hpp"
#include "muskat/operators.hpp"
#include "muskat/profile.hpp"

using namespace muskat;

namespace {

RadialGrid grid_of(benchmark::State& state) { return RadialGrid(1e-3, 1e3, static_cast<std::size_t>(state.range(0))); }

void forward_transform(benchmark::State& state) {
    RadialGrid grid = grid_of(state);
    RadialField f = RadialField::sample(grid, [](double r) { return std::exp(-0.5 * r * r); });
    for (auto _ : state) benchmark::DoNotOptimize(hankel_forward(f, grid));
}
BENCHMARK(forward_transform)->Arg(121)->Arg(241)->Arg(481)->Unit(benchmark::kMillisecond);

void inverse_transform(benchmark::State& state) {
    RadialGrid grid = grid_of(state);
    SpectralField spec = SpectralField::sample(grid, [](double rho) { return std::exp(-rho) / rho; }, -1.0);
    for (auto _ : state) benchmark::DoNotOptimize(hankel_inverse(spec, grid));
}
BENCHMARK(inverse_transform)->Arg(121)->Arg(241)->Arg(481)->Unit(benchmark::kMillisecond);

void resolvent(benchmark::State& state) {
    RadialGrid grid = grid_of(state);
    SpectralField spec = SpectralField::sample(grid, [](double rho) { return std::exp(-rho) / rho; }, -1.0);
    for (auto _ : state) benchmark::DoNotOptimize(resolvent_L(spec));
}
BENCHMARK(resolvent)->Arg(121)->Arg(241)->Arg(481)->Unit(benchmark::kMillisecond);

void nonlinear_point(benchmark::State& state) {
    LinearProfile k(0.1);
    QuadratureSpec q{};
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_T(k, k, 1.0, q));
}
BENCHMARK(nonlinear_point)->Unit(benchmark::kMillisecond);

void nonlinear_grid(benchmark::State& state) {
    LinearProfile k(0.1);
    QuadratureSpec q{};
    RadialGrid grid = grid_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_T_grid(k, k, grid, q));
}
BENCHMARK(nonlinear_grid)->Arg(31)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
