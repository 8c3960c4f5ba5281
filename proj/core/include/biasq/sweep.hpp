#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biasq/analysis.hpp"
#include "biasq/codegen.hpp"
#include "biasq/decoder.hpp"
#include "biasq/sampler.hpp"

namespace biasq {

/// Streams batches through the decoder until either cap is reached. Errors
/// are counted on observable 0 (the protected logical).
ShotStats sample_until(const GeneratedCircuit& gen, const MwpmDecoder& decoder,
                       uint64_t max_shots, uint64_t max_errors, uint64_t seed, int threads = 1);

/// Raw (decoder-off) rate of the given observable index; used for the
/// unprotected bit-flip floor cross-check.
ShotStats raw_observable_rate(const GeneratedCircuit& gen, uint32_t observable,
                              uint64_t shots, uint64_t seed, int threads = 1);

struct SweepTask {
    CodeSpec spec;
    NoiseParams noise;
};

struct SweepPlan {
    std::vector<SweepTask> tasks;
    uint64_t max_shots = 1000000;
    uint64_t max_errors = 1000;
    uint64_t seed = 1;
    int threads = 1;
    std::string out_path;       // final CSV
    bool resume = true;         // reuse <out>.manifest rows when present
};

struct SweepRow {
    SweepTask task;
    ShotStats stats;
    uint64_t task_seed;
    std::string to_csv() const;
};

extern const char* kSweepCsvHeader;

/// Runs every task (skipping manifest-cached ones), writes the CSV
/// deterministically in task order, and returns the rows.
std::vector<SweepRow> run_sweep(const SweepPlan& plan);

/// Convenience grid builders used by the CLI and the reproduction bundles.
std::vector<SweepTask> rep_grid(CodeFamily family, const std::vector<uint32_t>& distances,
                                const std::vector<double>& pzs, double px);
std::vector<SweepTask> xzzx_grid(const std::vector<uint32_t>& dxs,
                                 const std::vector<uint32_t>& dzs,
                                 const std::vector<double>& pzs,
                                 const std::vector<double>& etas, MemoryBasis memory);

/// Emits the CSV/fit bundle for one of the paper-style figures at desk scale.
/// Returns the list of files written. Unknown figures throw with the
/// supported list.
std::vector<std::string> run_reproduction(const std::string& figure, const std::string& out_dir,
                                          uint64_t max_shots, uint64_t max_errors, uint64_t seed,
                                          int threads);

// shots.bin: header of three little-endian u64 (detectors, observables,
// shots), then bit-packed rows (detectors first, LSB first).
void write_shots(const std::string& path, const ShotBatch& batch);
ShotBatch read_shots(const std::string& path);

}  // namespace biasq
