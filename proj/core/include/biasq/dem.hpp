#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "biasq/circuit.hpp"
#include "biasq/sampler.hpp"

namespace biasq {

struct FaultMechanism {
    double probability = 0;
    std::vector<uint32_t> detectors;    // sorted
    std::vector<uint32_t> observables;  // sorted

    bool operator==(const FaultMechanism& o) const = default;
};

struct DetectorErrorModel {
    uint32_t detector_count = 0;
    uint32_t observable_count = 0;
    std::vector<FaultMechanism> mechanisms;  // unique signatures, canonical order

    std::string to_json() const;
    static DetectorErrorModel from_json(const std::string& text);
};

/// One elementary fault before merging: flip mask over detectors then
/// observables (bit d for detector d, bit detector_count+o for observable o).
struct RawFault {
    std::vector<uint64_t> mask;
    double p;
};

/// Enumerates every independent probabilistic component of every channel and
/// propagates it to the detectors/observables it flips. `extra` adds frame
/// observables (same semantics as sampling).
std::vector<RawFault> collect_raw_faults(const Circuit& c,
                                         const std::vector<FrameObservable>& extra = {});

/// Merge raw faults by signature: p <- p1(1-p2) + p2(1-p1). Drops no-ops.
DetectorErrorModel merge_raw_faults(const Circuit& c, std::vector<RawFault> raws,
                                    const std::vector<FrameObservable>& extra = {});

/// Full pipeline; runs validate() first and throws on any diagnostic.
DetectorErrorModel extract_dem(const Circuit& c,
                               const std::vector<FrameObservable>& extra = {},
                               bool run_validation = true);

/// 0.5 * (1 - prod over mechanisms flipping `observable` of (1 - 2p)).
double bitflip_floor(const DetectorErrorModel& dem, uint32_t observable);

}  // namespace biasq
