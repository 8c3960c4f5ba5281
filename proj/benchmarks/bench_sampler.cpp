#include <benchmark/benchmark.h>

#include "biasq/codegen.hpp"
#include "biasq/sampler.hpp"

using namespace biasq;

namespace {
GeneratedCircuit make_rep(uint32_t d, double pz) {
    CodeSpec s;
    s.family = CodeFamily::RepMZ4Alternated;
    s.d = d;
    s.rounds = d;
    NoiseParams n;
    n.pz = pz;
    n.eta = 1e6;
    n.px_explicit = 1e-9;
    return build_circuit(s, n);
}
}  // namespace

static void BM_SampleRepAlternated(benchmark::State& state) {
    auto gen = make_rep(uint32_t(state.range(0)), 5e-3);
    FrameSimulator sim(gen.circuit, gen.frame_observables);
    std::vector<uint64_t> det, obs;
    uint64_t shot = 0;
    for (auto _ : state) {
        sim.run_shot(1234, shot++, det, obs);
        benchmark::DoNotOptimize(det.data());
    }
    state.SetItemsProcessed(int64_t(state.iterations()));
}
BENCHMARK(BM_SampleRepAlternated)->Arg(5)->Arg(11)->Arg(15)->Arg(25);

static void BM_SampleXzzx(benchmark::State& state) {
    CodeSpec s;
    s.family = CodeFamily::XZZX_MZ4;
    s.dx = 3;
    s.dz = uint32_t(state.range(0));
    s.rounds = s.dz;
    NoiseParams n;
    n.pz = 1e-3;
    n.eta = 1e3;
    auto gen = build_circuit(s, n);
    FrameSimulator sim(gen.circuit, gen.frame_observables);
    std::vector<uint64_t> det, obs;
    uint64_t shot = 0;
    for (auto _ : state) {
        sim.run_shot(99, shot++, det, obs);
        benchmark::DoNotOptimize(det.data());
    }
    state.SetItemsProcessed(int64_t(state.iterations()));
}
BENCHMARK(BM_SampleXzzx)->Arg(7)->Arg(11)->Arg(15);

// Throughput should grow linearly with the instruction count; the per-shot
// items/sec column divided by the circuit size makes regressions obvious.
static void BM_SampleScalesWithRounds(benchmark::State& state) {
    CodeSpec s;
    s.family = CodeFamily::RepMZ4Alternated;
    s.d = 9;
    s.rounds = uint32_t(state.range(0));
    NoiseParams n;
    n.pz = 5e-3;
    n.eta = 1e6;
    n.px_explicit = 1e-9;
    auto gen = build_circuit(s, n);
    FrameSimulator sim(gen.circuit, gen.frame_observables);
    std::vector<uint64_t> det, obs;
    uint64_t shot = 0;
    for (auto _ : state) {
        sim.run_shot(7, shot++, det, obs);
        benchmark::DoNotOptimize(det.data());
    }
    state.SetItemsProcessed(int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_SampleScalesWithRounds)->Arg(4)->Arg(8)->Arg(16)->Arg(32);
