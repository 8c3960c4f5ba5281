#include "biasq/decoder.hpp"

#include <algorithm>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <thread>

#include "biasq/blossom.hpp"

namespace biasq {

namespace {
constexpr int64_t kInf = INT64_MAX / 4;
}

MwpmDecoder::MwpmDecoder(const MatchingGraph& graph) : g_(graph) {
    if (!g_.is_path_graph()) return;
    // Fast path additionally requires boundary edges only at the chain ends.
    std::vector<uint32_t> deg(g_.detector_count, 0);
    for (const auto& e : g_.edges)
        if (e.v != GraphEdge::kBoundary) { deg[e.u]++; deg[e.v]++; }
    uint32_t start = UINT32_MAX;
    for (uint32_t d = 0; d < g_.detector_count; d++)
        if (deg[d] == 1) { start = d; break; }
    if (start == UINT32_MAX) return;

    chain_order_.clear();
    chain_pos_.assign(g_.detector_count, 0);
    chain_prefix_w_.assign(1, 0);
    chain_prefix_obs_.assign(1, 0);
    uint32_t prev = UINT32_MAX, cur = start;
    for (;;) {
        chain_pos_[cur] = uint32_t(chain_order_.size());
        chain_order_.push_back(cur);
        uint32_t next = UINT32_MAX;
        int64_t w = 0;
        uint32_t obs = 0;
        for (uint32_t eid : g_.adj[cur]) {
            const auto& e = g_.edges[eid];
            uint32_t other = e.u == cur ? e.v : e.u;
            if (other != prev) { next = other; w = e.weight; obs = e.obs_mask; break; }
        }
        if (next == UINT32_MAX) break;
        chain_prefix_w_.push_back(chain_prefix_w_.back() + w);
        chain_prefix_obs_.push_back(chain_prefix_obs_.back() ^ obs);
        prev = cur;
        cur = next;
    }
    if (chain_order_.size() != g_.detector_count) return;
    for (uint32_t d = 0; d < g_.detector_count; d++) {
        if (g_.boundary_edge[d] >= 0 && d != chain_order_.front() && d != chain_order_.back())
            return;
    }
    fastpath_ = true;
}

const MwpmDecoder::SourceRow& MwpmDecoder::row(uint32_t src) const {
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = rows_.find(src);
        if (it != rows_.end()) return *it->second;
    }
    SourceRow r;
    r.dist.assign(g_.detector_count, kInf);
    r.obs.assign(g_.detector_count, 0);
    r.pred.assign(g_.detector_count, UINT32_MAX);
    using Item = std::pair<int64_t, uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    r.dist[src] = 0;
    pq.push({0, src});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d != r.dist[u]) continue;
        for (uint32_t eid : g_.adj[u]) {
            const auto& e = g_.edges[eid];
            if (e.v == GraphEdge::kBoundary) continue;
            uint32_t v = e.u == u ? e.v : e.u;
            int64_t nd = d + e.weight;
            if (nd < r.dist[v] || (nd == r.dist[v] && u < r.pred[v])) {
                r.dist[v] = nd;
                r.obs[v] = r.obs[u] ^ e.obs_mask;
                r.pred[v] = u;
                pq.push({nd, v});
            }
        }
    }
    r.bdry_dist = kInf;
    r.bdry_obs = 0;
    for (uint32_t d = 0; d < g_.detector_count; d++) {
        if (g_.boundary_edge[d] < 0 || r.dist[d] >= kInf) continue;
        const auto& be = g_.edges[g_.boundary_edge[d]];
        int64_t bd = r.dist[d] + be.weight;
        if (bd < r.bdry_dist) {
            r.bdry_dist = bd;
            r.bdry_obs = r.obs[d] ^ be.obs_mask;
        }
    }
    std::lock_guard<std::mutex> lk(mu);
    auto [it, inserted] = rows_.emplace(src, std::make_unique<SourceRow>(std::move(r)));
    return *it->second;
}

DecodeResult MwpmDecoder::decode_general(const std::vector<uint32_t>& defects) const {
    DecodeResult res;
    size_t k = defects.size();
    if (k == 0) return res;

    std::vector<int64_t> pair_dist(k * k, kInf);
    std::vector<uint32_t> pair_obs(k * k, 0);
    std::vector<int64_t> bdry_dist(k, kInf);
    std::vector<uint32_t> bdry_obs(k, 0);
    for (size_t i = 0; i < k; i++) {
        const SourceRow& ri = row(defects[i]);
        bdry_dist[i] = ri.bdry_dist;
        bdry_obs[i] = ri.bdry_obs;
        for (size_t j = i + 1; j < k; j++) {
            pair_dist[i * k + j] = pair_dist[j * k + i] = ri.dist[defects[j]];
            pair_obs[i * k + j] = pair_obs[j * k + i] = ri.obs[defects[j]];
        }
    }

    // A defect pair whose path costs at least both boundary routes combined
    // never needs a direct match; dropping those edges splits the problem
    // into independent clusters without changing the optimal weight.
    std::vector<uint32_t> comp(k, UINT32_MAX);
    std::vector<size_t> stack;
    uint32_t n_comp = 0;
    for (size_t i = 0; i < k; i++) {
        if (comp[i] != UINT32_MAX) continue;
        comp[i] = n_comp;
        stack.push_back(i);
        while (!stack.empty()) {
            size_t u = stack.back();
            stack.pop_back();
            for (size_t v = 0; v < k; v++) {
                if (comp[v] != UINT32_MAX) continue;
                int64_t d = pair_dist[u * k + v];
                if (d >= kInf) continue;
                if (bdry_dist[u] < kInf && bdry_dist[v] < kInf &&
                    d >= bdry_dist[u] + bdry_dist[v])
                    continue;
                comp[v] = n_comp;
                stack.push_back(v);
            }
        }
        n_comp++;
    }

    for (uint32_t cc = 0; cc < n_comp; cc++) {
        std::vector<size_t> members;
        for (size_t i = 0; i < k; i++)
            if (comp[i] == cc) members.push_back(i);
        size_t m = members.size();
        if (m == 1) {
            size_t i = members[0];
            if (bdry_dist[i] >= kInf)
                throw std::runtime_error(
                    "defect cannot reach any partner or boundary (malformed graph)");
            res.predicted_observable_flips ^= bdry_obs[i];
            res.matching_weight += double(bdry_dist[i]) / double(kWeightScale);
            continue;
        }
        if (m == 2) {
            // Pair-or-boundary in closed form.
            size_t i = members[0], j = members[1];
            int64_t via_pair = pair_dist[i * k + j];
            int64_t via_bdry = (bdry_dist[i] < kInf && bdry_dist[j] < kInf)
                                   ? bdry_dist[i] + bdry_dist[j]
                                   : kInf;
            if (via_pair >= kInf && via_bdry >= kInf)
                throw std::runtime_error(
                    "defect cannot reach any partner or boundary (malformed graph)");
            if (via_pair <= via_bdry) {
                res.predicted_observable_flips ^= pair_obs[i * k + j];
                res.matching_weight += double(via_pair) / double(kWeightScale);
            } else {
                res.predicted_observable_flips ^= bdry_obs[i] ^ bdry_obs[j];
                res.matching_weight += double(via_bdry) / double(kWeightScale);
            }
            continue;
        }
        size_t n = 2 * m;  // cluster defects plus their boundary clones
        std::vector<int64_t> w(n * n, PerfectMatcher::kNoEdge);
        for (size_t a = 0; a < m; a++) {
            for (size_t b = a + 1; b < m; b++) {
                int64_t d = pair_dist[members[a] * k + members[b]];
                if (d < kInf) w[a * n + b] = w[b * n + a] = d;
            }
            if (bdry_dist[members[a]] < kInf)
                w[a * n + (m + a)] = w[(m + a) * n + a] = bdry_dist[members[a]];
        }
        for (size_t a = m; a < n; a++)
            for (size_t b = m; b < n; b++)
                if (a != b) w[a * n + b] = 0;

        PerfectMatcher pm;
        std::vector<int> mate;
        try {
            mate = pm.solve(int(n), w);
        } catch (const std::runtime_error&) {
            throw std::runtime_error(
                "defect cannot reach any partner or boundary (malformed graph)");
        }
        for (size_t a = 0; a < m; a++) {
            int mt = mate[a];
            if (mt < 0) throw std::runtime_error("unmatched defect");
            size_t i = members[a];
            if (size_t(mt) == m + a) {
                res.predicted_observable_flips ^= bdry_obs[i];
                res.matching_weight += double(bdry_dist[i]) / double(kWeightScale);
            } else if (size_t(mt) < m && size_t(mt) > a) {
                size_t j = members[size_t(mt)];
                res.predicted_observable_flips ^= pair_obs[i * k + j];
                res.matching_weight += double(pair_dist[i * k + j]) / double(kWeightScale);
            } else if (size_t(mt) >= m && size_t(mt) != m + a) {
                throw std::logic_error("defect matched to foreign boundary clone");
            }
        }
    }
    return res;
}

DecodeResult MwpmDecoder::decode_path_dp(const std::vector<uint32_t>& defects) const {
    if (!fastpath_) throw std::logic_error("path fast path unavailable for this graph");
    DecodeResult res;
    size_t k = defects.size();
    if (k == 0) return res;

    std::vector<uint32_t> order = defects;
    std::sort(order.begin(), order.end(),
              [&](uint32_t a, uint32_t b) { return chain_pos_[a] < chain_pos_[b]; });

    auto chain_dist = [&](uint32_t a, uint32_t b) {
        int64_t d = chain_prefix_w_[chain_pos_[b]] - chain_prefix_w_[chain_pos_[a]];
        return d < 0 ? -d : d;
    };
    auto chain_obs = [&](uint32_t a, uint32_t b) {
        return chain_prefix_obs_[chain_pos_[a]] ^ chain_prefix_obs_[chain_pos_[b]];
    };
    uint32_t left_end = chain_order_.front(), right_end = chain_order_.back();
    auto bdry = [&](uint32_t det) -> std::pair<int64_t, uint32_t> {
        int64_t best = kInf;
        uint32_t obs = 0;
        if (g_.boundary_edge[left_end] >= 0) {
            const auto& e = g_.edges[g_.boundary_edge[left_end]];
            int64_t d = chain_dist(det, left_end) + e.weight;
            if (d < best) { best = d; obs = chain_obs(det, left_end) ^ e.obs_mask; }
        }
        if (g_.boundary_edge[right_end] >= 0) {
            const auto& e = g_.edges[g_.boundary_edge[right_end]];
            int64_t d = chain_dist(det, right_end) + e.weight;
            if (d < best) { best = d; obs = chain_obs(det, right_end) ^ e.obs_mask; }
        }
        return {best, obs};
    };

    // dp over defects in chain order: match to boundary or to the previous one.
    std::vector<int64_t> dp(k + 1, kInf);
    std::vector<int8_t> choice(k + 1, 0);  // 1 = boundary, 2 = pair with previous
    dp[0] = 0;
    for (size_t i = 1; i <= k; i++) {
        auto [bd, bo] = bdry(order[i - 1]);
        if (bd < kInf && dp[i - 1] < kInf && dp[i - 1] + bd < dp[i]) {
            dp[i] = dp[i - 1] + bd;
            choice[i] = 1;
        }
        if (i >= 2 && dp[i - 2] < kInf) {
            int64_t pd = chain_dist(order[i - 2], order[i - 1]);
            if (dp[i - 2] + pd < dp[i]) {
                dp[i] = dp[i - 2] + pd;
                choice[i] = 2;
            }
        }
    }
    if (dp[k] >= kInf) throw std::runtime_error("path decode failed (no boundary route)");
    for (size_t i = k; i > 0;) {
        if (choice[i] == 1) {
            auto [bd, bo] = bdry(order[i - 1]);
            res.matching_weight += double(bd) / double(kWeightScale);
            res.predicted_observable_flips ^= bo;
            i -= 1;
        } else {
            res.matching_weight += double(chain_dist(order[i - 2], order[i - 1])) / double(kWeightScale);
            res.predicted_observable_flips ^= chain_obs(order[i - 2], order[i - 1]);
            i -= 2;
        }
    }
    return res;
}

DecodeResult MwpmDecoder::decode(const std::vector<uint32_t>& defects) const {
    if (fastpath_) return decode_path_dp(defects);
    return decode_general(defects);
}

BatchDecodeStats MwpmDecoder::decode_batch(const ShotBatch& shots, int threads) const {
    BatchDecodeStats stats;
    stats.shots = shots.shot_count;
    stats.errors_per_observable.assign(shots.observable_count, 0);

    auto run_range = [&](uint64_t lo, uint64_t hi, BatchDecodeStats& local) {
        std::vector<uint32_t> defects;
        for (uint64_t s = lo; s < hi; s++) {
            defects.clear();
            for (uint32_t d = 0; d < shots.detector_count; d++)
                if (shots.detector(s, d)) defects.push_back(d);
            DecodeResult r = decode(defects);
            bool any = false;
            for (uint32_t o = 0; o < shots.observable_count; o++) {
                bool actual = shots.observable(s, o);
                bool predicted = (r.predicted_observable_flips >> o) & 1;
                if (actual != predicted) {
                    local.errors_per_observable[o]++;
                    any = true;
                }
            }
            if (any) local.shots_with_any_error++;
        }
    };

    if (threads <= 1 || shots.shot_count < 256) {
        run_range(0, shots.shot_count, stats);
    } else {
        std::vector<BatchDecodeStats> locals(threads);
        for (auto& l : locals) l.errors_per_observable.assign(shots.observable_count, 0);
        std::vector<std::thread> pool;
        uint64_t chunk = (shots.shot_count + threads - 1) / threads;
        for (int t = 0; t < threads; t++) {
            uint64_t lo = t * chunk, hi = std::min<uint64_t>(shots.shot_count, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi, std::ref(locals[t]));
        }
        for (auto& th : pool) th.join();
        for (auto& l : locals) {
            stats.shots_with_any_error += l.shots_with_any_error;
            for (uint32_t o = 0; o < shots.observable_count; o++)
                stats.errors_per_observable[o] += l.errors_per_observable[o];
        }
    }
    return stats;
}

}  // namespace biasq
