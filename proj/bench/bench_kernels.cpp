#include <benchmark/benchmark.h>

#include "rlcdae/dae_solver.hpp"
#include "rlcdae/diagnostics.hpp"
#include "rlcdae/mna.hpp"
#include "rlcdae/observables.hpp"
#include "rlcdae/random_circuits.hpp"

using namespace rlcdae;

namespace {

Mat bench_matrix(int n)
{
    Rng rng(1);
    return random_stable_system(rng, n).A;
}

struct EnergyCase {
    MnaSystem sys;
    Trajectory tr;
};

EnergyCase energy_case(int nodes)
{
    Rng rng(2);
    RandomCircuitOptions o;
    o.nodes = nodes;
    o.degree = 3;
    o.target_index = 0;
    Circuit c = random_circuit(rng, o);
    MnaSystem s = assemble_mna(c);
    Vec x0 = Vec::Ones(s.layout.size());
    SimOptions so;
    so.k = 8;
    return {s, simulate(s, x0, 20.0, so)};
}

}  // namespace

static void BM_exp_norm(benchmark::State& st)
{
    Mat A = bench_matrix(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(exp_norm(A, 5.0));
}

static void BM_exp_norm_serial(benchmark::State& st)
{
    Mat A = bench_matrix(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(exp_norm_serial(A, 5.0));
}

static void BM_energy_trace(benchmark::State& st)
{
    EnergyCase e = energy_case(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(energy_trace(e.sys, e.tr));
}

static void BM_energy_trace_serial(benchmark::State& st)
{
    EnergyCase e = energy_case(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(energy_trace_serial(e.sys, e.tr));
}

BENCHMARK(BM_exp_norm)->Arg(8)->Arg(32)->Arg(96)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_exp_norm_serial)->Arg(8)->Arg(32)->Arg(96)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_energy_trace)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_energy_trace_serial)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
