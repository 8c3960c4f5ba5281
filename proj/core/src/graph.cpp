#include "biasq/graph.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>

namespace biasq {

namespace {

int64_t weight_of(double p) {
    if (p <= 0 || p >= 0.5)
        throw std::runtime_error("edge probability outside (0, 0.5): " + std::to_string(p));
    double w = -std::log(p / (1.0 - p));
    return int64_t(std::llround(w * double(kWeightScale)));
}

double combine_xor(double a, double b) { return a * (1 - b) + b * (1 - a); }

}  // namespace

bool MatchingGraph::is_path_graph() const {
    // Single chain: every detector has at most two detector neighbors and the
    // detector-degree sequence is consistent with one simple open path.
    if (detector_count == 0) return false;
    uint32_t deg1 = 0;
    std::vector<uint32_t> deg(detector_count, 0);
    for (const auto& e : edges)
        if (e.v != GraphEdge::kBoundary) { deg[e.u]++; deg[e.v]++; }
    for (uint32_t d = 0; d < detector_count; d++) {
        if (deg[d] > 2) return false;
        if (deg[d] <= 1) deg1++;
    }
    if (deg1 != 2) return false;
    // Connectivity: walk from one endpoint.
    uint32_t start = 0;
    for (uint32_t d = 0; d < detector_count; d++)
        if (deg[d] == 1) { start = d; break; }
    std::vector<char> seen(detector_count, 0);
    uint32_t count = 0, cur = start, prev = detector_count;
    for (;;) {
        seen[cur] = 1;
        count++;
        uint32_t next = detector_count;
        for (uint32_t eid : adj[cur]) {
            const auto& e = edges[eid];
            if (e.v == GraphEdge::kBoundary) continue;
            uint32_t other = e.u == cur ? e.v : e.u;
            if (other != prev && !seen[other]) { next = other; break; }
        }
        if (next == detector_count) break;
        prev = cur;
        cur = next;
    }
    return count == detector_count;
}

MatchingGraph build_matching_graph(const DetectorErrorModel& dem) {
    MatchingGraph g;
    g.detector_count = dem.detector_count;
    g.observable_count = dem.observable_count;
    g.adj.assign(dem.detector_count, {});
    g.boundary_edge.assign(dem.detector_count, -1);

    std::map<std::pair<uint32_t, uint32_t>, size_t> edge_index;

    auto obs_mask_of = [](const FaultMechanism& m) {
        uint32_t mask = 0;
        for (uint32_t o : m.observables) mask |= 1u << o;
        return mask;
    };

    auto add_or_merge = [&](uint32_t u, uint32_t v, double p, uint32_t obs) {
        auto key = std::make_pair(std::min(u, v), std::max(u, v));
        auto it = edge_index.find(key);
        if (it == edge_index.end()) {
            GraphEdge e{key.first, key.second, p, 0, obs};
            edge_index[key] = g.edges.size();
            g.edges.push_back(e);
        } else {
            GraphEdge& e = g.edges[it->second];
            if (e.obs_mask == obs) {
                e.p = combine_xor(e.p, p);
            } else if (p > e.p) {
                // Contradicting parallel edges: keep the likelier one.
                e.p = p;
                e.obs_mask = obs;
            }
        }
    };

    std::vector<const FaultMechanism*> heavy;
    for (const auto& m : dem.mechanisms) {
        if (m.detectors.empty()) continue;  // pure-observable faults have no graph home
        if (m.detectors.size() == 1) {
            add_or_merge(m.detectors[0], GraphEdge::kBoundary, m.probability, obs_mask_of(m));
        } else if (m.detectors.size() == 2) {
            add_or_merge(m.detectors[0], m.detectors[1], m.probability, obs_mask_of(m));
        } else {
            heavy.push_back(&m);
        }
    }

    // Decompose weight>2 mechanisms into existing edges (detector sets must
    // partition; observable masks must XOR to the mechanism's).
    for (const FaultMechanism* mp : heavy) {
        const auto& dets = mp->detectors;
        uint32_t want_obs = obs_mask_of(*mp);
        std::vector<std::pair<uint32_t, uint32_t>> parts;  // (u, v-or-boundary)
        std::vector<char> used(dets.size(), 0);
        std::function<bool(uint32_t)> solve = [&](uint32_t done) -> bool {
            if (done == dets.size()) {
                uint32_t acc = 0;
                for (auto& pr : parts) {
                    auto key = std::make_pair(std::min(pr.first, pr.second),
                                              std::max(pr.first, pr.second));
                    acc ^= g.edges[edge_index.at(key)].obs_mask;
                }
                return acc == want_obs;
            }
            uint32_t i = 0;
            while (used[i]) i++;
            used[i] = 1;
            // Pair with a later detector along an existing edge.
            for (uint32_t j = i + 1; j < dets.size(); j++) {
                if (used[j]) continue;
                auto key = std::make_pair(std::min(dets[i], dets[j]), std::max(dets[i], dets[j]));
                if (edge_index.count(key)) {
                    used[j] = 1;
                    parts.push_back({dets[i], dets[j]});
                    if (solve(done + 2)) return true;
                    parts.pop_back();
                    used[j] = 0;
                }
            }
            // Or send it to the boundary.
            auto bkey = std::make_pair(dets[i], GraphEdge::kBoundary);
            if (edge_index.count(bkey)) {
                parts.push_back({dets[i], GraphEdge::kBoundary});
                if (solve(done + 1)) return true;
                parts.pop_back();
            }
            used[i] = 0;
            return false;
        };
        if (!solve(0)) {
            std::string msg = "undecomposable mechanism p=" + std::to_string(mp->probability) + " dets=";
            for (uint32_t d : dets) msg += std::to_string(d) + " ";
            throw std::runtime_error(msg);
        }
        for (auto& pr : parts) {
            auto key = std::make_pair(std::min(pr.first, pr.second), std::max(pr.first, pr.second));
            GraphEdge& e = g.edges[edge_index.at(key)];
            e.p = combine_xor(e.p, mp->probability);
        }
    }

    for (size_t i = 0; i < g.edges.size(); i++) {
        GraphEdge& e = g.edges[i];
        e.weight = weight_of(e.p);
        if (e.v == GraphEdge::kBoundary) {
            g.boundary_edge[e.u] = int32_t(i);
            g.boundary_class_count = 1;
        } else {
            g.adj[e.u].push_back(uint32_t(i));
            g.adj[e.v].push_back(uint32_t(i));
        }
    }
    // Boundary edges also appear in adjacency for path search bookkeeping.
    return g;
}

}  // namespace biasq
