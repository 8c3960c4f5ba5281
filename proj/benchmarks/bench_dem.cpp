#include <benchmark/benchmark.h>

#include "biasq/dem.hpp"
#include "biasq/graph.hpp"
#include "biasq/codegen.hpp"

using namespace biasq;

static void BM_ExtractDem(benchmark::State& state) {
    CodeSpec s;
    s.family = CodeFamily::RepMZ4Alternated;
    s.d = uint32_t(state.range(0));
    s.rounds = s.d;
    NoiseParams n;
    n.pz = 5e-3;
    n.eta = 1e4;
    auto gen = build_circuit(s, n);
    for (auto _ : state) {
        auto dem = extract_dem(gen.circuit, gen.frame_observables, false);
        benchmark::DoNotOptimize(dem.mechanisms.size());
    }
}
BENCHMARK(BM_ExtractDem)->Arg(5)->Arg(11)->Arg(15);

static void BM_BuildMatchingGraph(benchmark::State& state) {
    CodeSpec s;
    s.family = CodeFamily::XZZX_MZ4;
    s.dx = 3;
    s.dz = uint32_t(state.range(0));
    s.rounds = s.dz;
    NoiseParams n;
    n.pz = 3e-3;
    n.eta = 100;
    auto gen = build_circuit(s, n);
    auto dem = extract_dem(gen.circuit, gen.frame_observables, false);
    for (auto _ : state) {
        auto graph = build_matching_graph(dem);
        benchmark::DoNotOptimize(graph.edges.size());
    }
}
BENCHMARK(BM_BuildMatchingGraph)->Arg(7)->Arg(11);

BENCHMARK_MAIN();
