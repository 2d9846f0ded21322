/// @file bench_fv_step.cpp
/// @brief Serial reference vs OpenMP kernel for one 2D finite-volume step.
#include "maxlab/multid.hpp"

#include <benchmark/benchmark.h>

using namespace maxlab;
using namespace maxlab::multid;

namespace {

const Eos kEos{EosKind::isothermal, 1.0};

template <Execution exec>
void bm_fv_step(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid2D g = make_initial_grid(InitialData::deformation_map, n, n);
    const double dt = 0.5 * stable_dt(g, kEos, 1.0);
    Grid2D out = g;
    for (auto _ : state) {
        if constexpr (exec == Execution::serial)
            fv_step_serial(g, out, dt, kEos, 1.0, 0.5);
        else
            fv_step_parallel(g, out, dt, kEos, 1.0, 0.5);
        benchmark::DoNotOptimize(out.cells.data());
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}

}  // namespace

BENCHMARK(bm_fv_step<Execution::serial>)->Name("fv_step/serial")->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(bm_fv_step<Execution::parallel>)->Name("fv_step/parallel")->Arg(64)->Arg(128)->Arg(256);

BENCHMARK_MAIN();
