#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "biasq/dem.hpp"

namespace biasq {

/// Weight unit: -ln(p/(1-p)) scaled to integers so matching optima and tie
/// breaks are platform-independent.
constexpr int64_t kWeightScale = 1 << 20;

struct GraphEdge {
    uint32_t u, v;          // detector ids; v == kBoundary for boundary edges
    double p = 0;
    int64_t weight = 0;     // scaled
    uint32_t obs_mask = 0;
    static constexpr uint32_t kBoundary = 0xffffffffu;
};

struct MatchingGraph {
    uint32_t detector_count = 0;
    uint32_t observable_count = 0;
    std::vector<GraphEdge> edges;                      // unique (u,v) pairs
    std::vector<std::vector<uint32_t>> adj;            // detector -> edge ids
    std::vector<int32_t> boundary_edge;                // detector -> edge id or -1
    uint32_t boundary_class_count = 0;

    bool is_path_graph() const;
};

/// Builds the decoder graph: weight-1 mechanisms become boundary edges,
/// weight-2 become edges, heavier mechanisms are decomposed into existing
/// edges whose detector sets XOR to the mechanism (error when impossible).
MatchingGraph build_matching_graph(const DetectorErrorModel& dem);

}  // namespace biasq
