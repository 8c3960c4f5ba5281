#include "biasq/blossom.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace biasq {

namespace {

// Classic O(n^3) maximum-weight general matching with explicit blossoms
// ("flower" arrays, dual variables doubled to stay integral).
struct MaxWeightMatching {
    struct Edge { int u = 0, v = 0; int64_t w = 0; };

    int n = 0, n_x = 0;
    std::vector<std::vector<Edge>> g;
    std::vector<int64_t> lab;
    std::vector<int> match, slack, st, pa, S, vis;
    std::vector<std::vector<int>> flower, flower_from;
    std::deque<int> q;

    int64_t e_delta(const Edge& e) const { return lab[e.u] + lab[e.v] - g[e.u][e.v].w * 2; }

    void update_slack(int u, int x) {
        if (!slack[x] || e_delta(g[u][x]) < e_delta(g[slack[x]][x])) slack[x] = u;
    }
    void set_slack(int x) {
        slack[x] = 0;
        for (int u = 1; u <= n; u++)
            if (g[u][x].w > 0 && st[u] != x && S[st[u]] == 0) update_slack(u, x);
    }
    void q_push(int x) {
        if (x <= n) { q.push_back(x); return; }
        for (int i : flower[x]) q_push(i);
    }
    void set_st(int x, int b) {
        st[x] = b;
        if (x > n)
            for (int i : flower[x]) set_st(i, b);
    }
    int get_pr(int b, int xr) {
        int pr = int(std::find(flower[b].begin(), flower[b].end(), xr) - flower[b].begin());
        if (pr % 2 == 1) {
            std::reverse(flower[b].begin() + 1, flower[b].end());
            return int(flower[b].size()) - pr;
        }
        return pr;
    }
    void set_match(int u, int v) {
        match[u] = g[u][v].v;
        if (u <= n) return;
        Edge e = g[u][v];
        int xr = flower_from[u][e.u], pr = get_pr(u, xr);
        for (int i = 0; i < pr; i++) set_match(flower[u][i], flower[u][i ^ 1]);
        set_match(xr, v);
        std::rotate(flower[u].begin(), flower[u].begin() + pr, flower[u].end());
    }
    void augment(int u, int v) {
        for (;;) {
            int xnv = st[match[u]];
            set_match(u, v);
            if (!xnv) return;
            set_match(xnv, st[pa[xnv]]);
            u = st[pa[xnv]];
            v = xnv;
        }
    }
    int get_lca(int u, int v) {
        static thread_local int t = 0;
        for (++t; u || v; std::swap(u, v)) {
            if (u == 0) continue;
            if (vis[u] == t) return u;
            vis[u] = t;
            u = st[match[u]];
            if (u) u = st[pa[u]];
        }
        return 0;
    }
    void add_blossom(int u, int lca, int v) {
        int b = n + 1;
        while (b <= n_x && st[b]) b++;
        if (b > n_x) n_x++;
        lab[b] = 0;
        S[b] = 0;
        match[b] = match[lca];
        flower[b].clear();
        flower[b].push_back(lca);
        for (int x = u, y; x != lca; x = st[pa[y]]) {
            flower[b].push_back(x);
            flower[b].push_back(y = st[match[x]]);
            q_push(y);
        }
        std::reverse(flower[b].begin() + 1, flower[b].end());
        for (int x = v, y; x != lca; x = st[pa[y]]) {
            flower[b].push_back(x);
            flower[b].push_back(y = st[match[x]]);
            q_push(y);
        }
        set_st(b, b);
        for (int x = 1; x <= n_x; x++) g[b][x].w = g[x][b].w = 0;
        for (int x = 1; x <= n; x++) flower_from[b][x] = 0;
        for (int xs : flower[b]) {
            for (int x = 1; x <= n_x; x++)
                if (g[b][x].w == 0 || e_delta(g[xs][x]) < e_delta(g[b][x])) {
                    g[b][x] = g[xs][x];
                    g[x][b] = g[x][xs];
                }
            for (int x = 1; x <= n; x++)
                if (flower_from[xs][x]) flower_from[b][x] = xs;
        }
        set_slack(b);
    }
    void expand_blossom(int b) {
        for (int i : flower[b]) set_st(i, i);
        int xr = flower_from[b][g[b][pa[b]].u], pr = get_pr(b, xr);
        for (int i = 0; i < pr; i += 2) {
            int xs = flower[b][i], xns = flower[b][i + 1];
            pa[xs] = g[xns][xs].u;
            S[xs] = 1;
            S[xns] = 0;
            slack[xs] = 0;
            set_slack(xns);
            q_push(xns);
        }
        S[xr] = 1;
        pa[xr] = pa[b];
        for (size_t i = pr + 1; i < flower[b].size(); i++) {
            int xs = flower[b][i];
            S[xs] = -1;
            set_slack(xs);
        }
        st[b] = 0;
    }
    bool on_found_edge(const Edge& e) {
        int u = st[e.u], v = st[e.v];
        if (S[v] == -1) {
            pa[v] = e.u;
            S[v] = 1;
            int nu = st[match[v]];
            slack[v] = slack[nu] = 0;
            S[nu] = 0;
            q_push(nu);
        } else if (S[v] == 0) {
            int lca = get_lca(u, v);
            if (!lca) {
                augment(u, v);
                augment(v, u);
                return true;
            }
            add_blossom(u, lca, v);
        }
        return false;
    }
    bool matching_round() {
        std::fill(S.begin(), S.begin() + n_x + 1, -1);
        std::fill(slack.begin(), slack.begin() + n_x + 1, 0);
        q.clear();
        for (int x = 1; x <= n_x; x++)
            if (st[x] == x && !match[x]) {
                pa[x] = 0;
                S[x] = 0;
                q_push(x);
            }
        if (q.empty()) return false;
        for (;;) {
            while (!q.empty()) {
                int u = q.front();
                q.pop_front();
                if (S[st[u]] == 1) continue;
                for (int v = 1; v <= n; v++)
                    if (g[u][v].w > 0 && st[u] != st[v]) {
                        if (e_delta(g[u][v]) == 0) {
                            if (on_found_edge(g[u][v])) return true;
                        } else {
                            update_slack(u, st[v]);
                        }
                    }
            }
            int64_t d = INT64_MAX;
            for (int b = n + 1; b <= n_x; b++)
                if (st[b] == b && S[b] == 1) d = std::min(d, lab[b] / 2);
            for (int x = 1; x <= n_x; x++)
                if (st[x] == x && slack[x]) {
                    if (S[x] == -1) d = std::min(d, e_delta(g[slack[x]][x]));
                    else if (S[x] == 0) d = std::min(d, e_delta(g[slack[x]][x]) / 2);
                }
            for (int u = 1; u <= n; u++) {
                if (S[st[u]] == 0) {
                    if (lab[u] <= d) return false;
                    lab[u] -= d;
                } else if (S[st[u]] == 1) {
                    lab[u] += d;
                }
            }
            for (int b = n + 1; b <= n_x; b++)
                if (st[b] == b) {
                    if (S[b] == 0) lab[b] += d * 2;
                    else if (S[b] == 1) lab[b] -= d * 2;
                }
            q.clear();
            for (int x = 1; x <= n_x; x++)
                if (st[x] == x && slack[x] && st[slack[x]] != x &&
                    e_delta(g[slack[x]][x]) == 0) {
                    if (on_found_edge(g[slack[x]][x])) return true;
                }
            for (int b = n + 1; b <= n_x; b++)
                if (st[b] == b && S[b] == 1 && lab[b] == 0) expand_blossom(b);
        }
    }

    // Returns matched pair count; mate in match[1..n] (0 = unmatched).
    // Buffers grow monotonically and are reset only over the used range, so
    // a thread-local instance amortizes allocation across many solves.
    int run(int nn, const std::vector<int64_t>& weights) {
        n = nn;
        int cap = 2 * n + 1;
        if (int(g.size()) < cap) {
            g.resize(cap);
            for (auto& row : g) row.resize(cap);
            lab.resize(cap);
            match.resize(cap);
            slack.resize(cap);
            st.resize(cap);
            pa.resize(cap);
            S.resize(cap);
            vis.resize(cap);
            flower.resize(cap);
            flower_from.resize(cap);
        }
        for (int i = 0; i < cap; i++) {
            if (int(g[i].size()) < cap) g[i].resize(cap);
            if (int(flower_from[i].size()) < n + 1) flower_from[i].resize(n + 1);
            lab[i] = 0;
            match[i] = 0;
            slack[i] = 0;
            st[i] = 0;
            pa[i] = 0;
            S[i] = -1;
            vis[i] = 0;
            flower[i].clear();
            std::fill(flower_from[i].begin(), flower_from[i].begin() + n + 1, 0);
        }
        n_x = n;
        for (int u = 1; u <= n; u++) {
            st[u] = u;
            flower_from[u][u] = u;
            for (int v = 1; v <= n; v++) g[u][v] = Edge{u, v, 0};
        }
        int64_t w_max = 0;
        for (int u = 1; u <= n; u++)
            for (int v = 1; v <= n; v++) {
                int64_t w = weights[(u - 1) * n + (v - 1)];
                if (u != v && w > 0) {
                    g[u][v].w = w;
                    w_max = std::max(w_max, w);
                }
            }
        for (int u = 1; u <= n; u++) lab[u] = w_max;
        int pairs = 0;
        while (matching_round()) pairs++;
        return pairs;
    }
};

}  // namespace

std::vector<int> PerfectMatcher::solve(int n, const std::vector<int64_t>& w) {
    static thread_local MaxWeightMatching matcher;
    total_weight_ = 0;
    if (n == 0) return {};
    if (n % 2) throw std::runtime_error("perfect matching needs even vertex count");

    // Shift to positive weights so maximum-weight matching is forced perfect:
    // w' = C - w with C exceeding the total weight of all edges.
    int64_t sum = 0, present = 0;
    for (int u = 0; u < n; u++)
        for (int v = u + 1; v < n; v++) {
            int64_t e = w[u * n + v];
            if (e != kNoEdge) {
                sum += e;
                present++;
            }
        }
    if (present == 0 && n > 0) throw std::runtime_error("no edges for perfect matching");
    int64_t C = sum + 1;

    std::vector<int64_t> shifted(size_t(n) * n, 0);
    for (int u = 0; u < n; u++)
        for (int v = 0; v < n; v++) {
            int64_t e = w[u * n + v];
            shifted[u * n + v] = (u != v && e != kNoEdge) ? (C - e) : 0;
        }

    MaxWeightMatching& m = matcher;
    int pairs = m.run(n, shifted);
    if (pairs * 2 != n) throw std::runtime_error("graph admits no perfect matching");

    std::vector<int> mate(n, -1);
    for (int u = 1; u <= n; u++) {
        if (m.match[u]) mate[u - 1] = m.match[u] - 1;
    }
    for (int u = 0; u < n; u++) {
        if (mate[u] < 0 || mate[mate[u]] != u)
            throw std::runtime_error("matching internal inconsistency");
        if (mate[u] > u) total_weight_ += w[u * n + mate[u]];
    }
    return mate;
}

}  // namespace biasq
