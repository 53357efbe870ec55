// Microbenchmarks for the hot paths: discrete operators, one solver step,
// and the pressure pipeline.

#include <cmath>

#include <benchmark/benchmark.h>

#include "radch/analytic.hpp"
#include "radch/pressure.hpp"
#include "radch/solver.hpp"

namespace {

using namespace radch;

ModelParams bench_params(double eps, double alpha, double m_tilde) {
    ModelParams p;
    p.n_dim = 2;
    p.a = 1.0;
    p.r0 = 2.0;
    p.M = 5.0;
    p.eps = eps;
    p.alpha = alpha;
    p.m_tilde = m_tilde;
    return p;
}

void BM_radial_laplacian(benchmark::State& state) {
    const std::size_t cells = static_cast<std::size_t>(state.range(0));
    const RadialGrid g = make_grid(1.0, 5.0, cells, 2);
    Field f(g);
    for (std::size_t i = 0; i < g.nodes(); ++i) f[i] = std::sin(g.r(i));
    for (auto _ : state) {
        Field lap = radial_laplacian(f);
        benchmark::DoNotOptimize(lap[cells / 2]);
    }
    state.SetItemsProcessed(state.iterations() * cells);
}
BENCHMARK(BM_radial_laplacian)->Arg(400)->Arg(4000);

void BM_transport_step(benchmark::State& state) {
    const std::size_t cells = static_cast<std::size_t>(state.range(0));
    const ModelParams p = bench_params(0.1, ModelParams::alpha_infinity(), 0.0);
    const Potential pot;
    const Profile prof(0.5, pot);
    const RadialGrid g = make_grid(1.0, p.M, cells, p.n_dim);
    SolverState s = make_initial_state(g, p, prof, pot);
    StepConfig cfg;
    cfg.dt = 0.4 * g.h() / p.a;
    for (auto _ : state) {
        s = step(s, cfg, pot);
        benchmark::DoNotOptimize(s.c[cells / 2]);
    }
    state.SetItemsProcessed(state.iterations() * cells);
}
BENCHMARK(BM_transport_step)->Arg(400)->Arg(1600);

void BM_diffusive_step(benchmark::State& state) {
    const std::size_t cells = static_cast<std::size_t>(state.range(0));
    const ModelParams p = bench_params(0.1, 0.0, 1.0);
    const Potential pot;
    const Profile prof(0.5, pot);
    const RadialGrid g = make_grid(1.0, p.M, cells, p.n_dim);
    SolverState s = make_initial_state(g, p, prof, pot);
    StepConfig cfg;
    cfg.dt = 0.4 * g.h() / p.a;
    for (auto _ : state) {
        s = step(s, cfg, pot);  // includes a fresh banded factorization
        benchmark::DoNotOptimize(s.c[cells / 2]);
    }
    state.SetItemsProcessed(state.iterations() * cells);
}
BENCHMARK(BM_diffusive_step)->Arg(400)->Arg(1600);

void BM_pressure_pipeline(benchmark::State& state) {
    const std::size_t cells = static_cast<std::size_t>(state.range(0));
    const ModelParams p = bench_params(0.05, ModelParams::alpha_infinity(), 0.0);
    const Potential pot;
    const Profile prof(0.5, pot);
    const RadialGrid g = make_grid(1.0, p.M, cells, p.n_dim);
    const Field c = transport_solution_field(g, 3.0, p, prof);
    const double R = interface_state(3.0, p).R;
    for (auto _ : state) {
        const PressureDecomposition dec = decompose(c, p);
        const JumpMeasurement m = jump(dec, R, 0.25, 3.0);
        benchmark::DoNotOptimize(m.value);
    }
    state.SetItemsProcessed(state.iterations() * cells);
}
BENCHMARK(BM_pressure_pipeline)->Arg(800)->Arg(3200);

}  // namespace

BENCHMARK_MAIN();
