#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "biasq/graph.hpp"
#include "biasq/sampler.hpp"

namespace biasq {

struct DecodeResult {
    uint32_t predicted_observable_flips = 0;
    double matching_weight = 0;

    bool operator==(const DecodeResult& o) const = default;
};

struct BatchDecodeStats {
    uint64_t shots = 0;
    std::vector<uint64_t> errors_per_observable;
    uint64_t shots_with_any_error = 0;
};

/// Exact MWPM decoding against a fixed matching graph. Shortest defect-defect
/// paths are computed on demand (deterministic tie-breaking) and memoized, so
/// batch decoding amortizes to a blossom solve per shot.
class MwpmDecoder {
  public:
    explicit MwpmDecoder(const MatchingGraph& graph);

    DecodeResult decode(const std::vector<uint32_t>& flipped_detectors) const;

    /// Forces a specific engine; used by equivalence tests.
    DecodeResult decode_general(const std::vector<uint32_t>& flipped_detectors) const;
    DecodeResult decode_path_dp(const std::vector<uint32_t>& flipped_detectors) const;

    BatchDecodeStats decode_batch(const ShotBatch& shots, int threads = 1) const;

    bool path_fastpath_available() const { return fastpath_; }

  private:
    const MatchingGraph& g_;
    bool fastpath_ = false;

    // Chain data for the path fast path.
    std::vector<uint32_t> chain_order_;      // detector ids along the chain
    std::vector<uint32_t> chain_pos_;        // detector -> position
    std::vector<int64_t> chain_prefix_w_;    // prefix weight along chain
    std::vector<uint32_t> chain_prefix_obs_; // prefix obs mask along chain

    struct SourceRow {
        std::vector<int64_t> dist;
        std::vector<uint32_t> obs;
        std::vector<uint32_t> pred;
        int64_t bdry_dist;
        uint32_t bdry_obs;
    };
    mutable std::unordered_map<uint32_t, std::unique_ptr<SourceRow>> rows_;

    const SourceRow& row(uint32_t src) const;
};

}  // namespace biasq
