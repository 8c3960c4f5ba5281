#include <benchmark/benchmark.h>

#include "biasq/decoder.hpp"
#include "biasq/dem.hpp"
#include "biasq/graph.hpp"
#include "biasq/sweep.hpp"

using namespace biasq;

static void BM_DecodeRepAlternated(benchmark::State& state) {
    CodeSpec s;
    s.family = CodeFamily::RepMZ4Alternated;
    s.d = uint32_t(state.range(0));
    s.rounds = s.d;
    NoiseParams n;
    n.pz = double(state.range(1)) * 1e-3;
    n.eta = 1e6;
    n.px_explicit = 1e-9;
    auto gen = build_circuit(s, n);
    auto dem = extract_dem(gen.circuit, gen.frame_observables, false);
    auto graph = build_matching_graph(dem);
    MwpmDecoder dec(graph);
    auto batch = sample(gen.circuit, 4096, 5, gen.frame_observables);
    std::vector<uint32_t> defects;
    uint64_t shot = 0;
    for (auto _ : state) {
        defects.clear();
        uint64_t sh = shot++ % batch.shot_count;
        for (uint32_t d = 0; d < batch.detector_count; d++)
            if (batch.detector(sh, d)) defects.push_back(d);
        auto r = dec.decode(defects);
        benchmark::DoNotOptimize(r.matching_weight);
    }
    state.SetItemsProcessed(int64_t(state.iterations()));
}
BENCHMARK(BM_DecodeRepAlternated)->Args({9, 5})->Args({15, 5})->Args({15, 11})->Args({25, 5});

static void BM_DecodeXzzx(benchmark::State& state) {
    CodeSpec s;
    s.family = CodeFamily::XZZX_MZ4;
    s.dx = 3;
    s.dz = uint32_t(state.range(0));
    s.rounds = s.dz;
    NoiseParams n;
    n.pz = 3e-3;
    n.eta = 1e3;
    auto gen = build_circuit(s, n);
    auto dem = extract_dem(gen.circuit, gen.frame_observables, false);
    auto graph = build_matching_graph(dem);
    MwpmDecoder dec(graph);
    auto batch = sample(gen.circuit, 2048, 5, gen.frame_observables);
    std::vector<uint32_t> defects;
    uint64_t shot = 0;
    for (auto _ : state) {
        defects.clear();
        uint64_t sh = shot++ % batch.shot_count;
        for (uint32_t d = 0; d < batch.detector_count; d++)
            if (batch.detector(sh, d)) defects.push_back(d);
        auto r = dec.decode(defects);
        benchmark::DoNotOptimize(r.matching_weight);
    }
    state.SetItemsProcessed(int64_t(state.iterations()));
}
BENCHMARK(BM_DecodeXzzx)->Arg(7)->Arg(11);
