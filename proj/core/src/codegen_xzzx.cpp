#include <numeric>
#include <stdexcept>

#include "biasq/codegen_internal.hpp"

namespace biasq {

using detail::xor_into;
using detail::xor_set;

namespace {

// Non-rotated XZZX lattice. Site kinds: H (integer vertices, X legs of the
// vertex stabilizers), V (half-integer, X legs of the plaquettes), E
// (boundary helpers completing the three-body XZZ plaquettes). Every site
// owns a qubit pair and its data hops within the pair whenever one of its
// stabilizers is measured.
struct Lattice {
    uint32_t dx, dz;
    uint32_t h_count, v_count, e_count;

    explicit Lattice(uint32_t dx_, uint32_t dz_) : dx(dx_), dz(dz_) {
        h_count = dz * dx;
        v_count = (dz - 1) * (dx - 1);
        e_count = 2 * (dx - 1);
    }
    uint32_t sites() const { return h_count + v_count + e_count; }
    uint32_t H(uint32_t a, uint32_t b) const { return a * dx + b; }
    uint32_t V(uint32_t a, uint32_t b) const { return h_count + a * (dx - 1) + b; }
    uint32_t E(uint32_t side, uint32_t b) const { return h_count + v_count + side * (dx - 1) + b; }
    bool is_h(uint32_t s) const { return s < h_count; }
    bool is_e(uint32_t s) const { return s >= h_count + v_count; }
};

struct Stab {
    std::vector<uint32_t> xlegs;                      // teleporting sites
    std::vector<std::pair<uint32_t, uint32_t>> pairs; // (xleg, zleg) CZ pairing
    std::vector<uint32_t> zlegs;
    uint32_t partition;
    bool site_type;  // true: X on the H legs (vertex type)
};

std::vector<Stab> enumerate_stabs(const Lattice& L) {
    std::vector<Stab> stabs;
    for (uint32_t a = 0; a + 1 < L.dz; a++) {
        for (uint32_t b = 0; b < L.dx; b++) {
            Stab s;
            s.site_type = true;
            s.partition = a % 2;
            s.xlegs = {L.H(a, b), L.H(a + 1, b)};
            if (b < L.dx - 1) {
                s.pairs.push_back({L.H(a, b), L.V(a, b)});
                s.zlegs.push_back(L.V(a, b));
            }
            if (b > 0) {
                s.pairs.push_back({L.H(a + 1, b), L.V(a, b - 1)});
                s.zlegs.push_back(L.V(a, b - 1));
            }
            stabs.push_back(std::move(s));
        }
    }
    for (uint32_t a = 0; a < L.dz; a++) {
        for (uint32_t b = 0; b + 1 < L.dx; b++) {
            Stab s;
            s.site_type = false;
            s.partition = (a + 1) % 2;
            uint32_t x_up = (a < L.dz - 1) ? L.V(a, b) : L.E(1, b);
            uint32_t x_dn = (a > 0) ? L.V(a - 1, b) : L.E(0, b);
            s.xlegs = {x_up, x_dn};
            s.pairs.push_back({x_up, L.H(a, b)});
            s.pairs.push_back({x_dn, L.H(a, b + 1)});
            s.zlegs = {L.H(a, b), L.H(a, b + 1)};
            stabs.push_back(std::move(s));
        }
    }
    return stabs;
}

}  // namespace

GeneratedCircuit build_xzzx_mz4(const CodeSpec& spec, const NoiseParams& noise) {
    uint32_t dx = spec.dx, dz = spec.dz;
    if (dx < 3 || dz < 3 || dx % 2 == 0 || dz % 2 == 0)
        throw std::invalid_argument("XZZX distances must be odd and >= 3");
    if (spec.rounds < 2) throw std::invalid_argument("XZZX needs at least 2 rounds");

    Lattice L(dx, dz);
    const uint32_t n = 2 * L.sites();
    const bool plus = spec.memory == MemoryBasis::PlusMemory;
    const double pz = noise.pz, px = noise.px();
    const double mpp_flip = px;  // pz/eta by default
    const double mx_flip = pz;

    GeneratedCircuit out;
    out.spec = spec;
    out.footprint = {n, 4};
    Circuit& c = out.circuit;
    c.qubit_count = n;

    auto stabs = enumerate_stabs(L);
    // Pending single-site frames as record sets: the unapplied teleport
    // corrections.  CZ gates exchange X content into partner Z content.
    std::vector<std::vector<uint32_t>> fx(L.sites()), fz(L.sites());
    std::vector<uint32_t> cur(L.sites(), 0);
    auto data_q = [&](uint32_t s) { return 2 * s + cur[s]; };
    auto anc_q = [&](uint32_t s) { return 2 * s + 1 - cur[s]; };

    std::vector<char> alive(n, 0);
    std::vector<std::vector<uint32_t>> prev_sigma(stabs.size());
    std::vector<char> have_prev(stabs.size(), 0);

    auto noise_alive = [&]() {
        std::vector<uint32_t> qs;
        for (uint32_t q = 0; q < n; q++)
            if (alive[q]) qs.push_back(q);
        c.biased_pauli1(qs, px / 2, px / 2, pz);
    };

    {
        std::vector<uint32_t> rx_list, rz_list;
        for (uint32_t s = 0; s < L.sites(); s++) {
            bool x_basis = L.is_h(s) ? plus : !plus;
            if (L.is_e(s)) x_basis = true;
            (x_basis ? rx_list : rz_list).push_back(data_q(s));
            alive[data_q(s)] = 1;
        }
        if (!rx_list.empty()) c.rx(rx_list);
        if (!rz_list.empty()) c.rz(rz_list);
        c.tick();
    }

    for (uint32_t t = 0; t < spec.rounds; t++) {
        uint32_t part = t % 2;
        // Two sub-steps: vertex-type gadgets complete before plaquette-type
        // gadgets read the freshly teleported positions. Each stabilizer uses
        // one Z^4 and four CZ gates: two opening CZs dress the X legs with
        // their Z-leg partners, two closing CZs transfer the dressing onto
        // the teleported outputs.
        for (int type_pass = 0; type_pass < 2; type_pass++) {
            bool want_site_type = (type_pass == 0);
            std::vector<size_t> todo;
            for (size_t i = 0; i < stabs.size(); i++)
                if (stabs[i].partition == part && stabs[i].site_type == want_site_type)
                    todo.push_back(i);
            if (todo.empty()) continue;

            std::vector<uint32_t> targets;
            for (size_t i : todo)
                for (uint32_t u : stabs[i].xlegs) {
                    targets.push_back(anc_q(u));
                    alive[anc_q(u)] = 1;
                }
            c.rx(targets);

            // Opening CZs; conjugation exchanges pending X content into
            // partner Z frames on both sides.
            for (size_t i : todo) {
                for (auto [u, w] : stabs[i].pairs) {
                    c.cz(data_q(u), data_q(w));
                    xor_into(fz[u], fx[w]);
                    xor_into(fz[w], fx[u]);
                }
            }

            std::vector<uint32_t> s_rec(todo.size());
            for (size_t k = 0; k < todo.size(); k++) {
                const Stab& st = stabs[todo[k]];
                std::vector<uint32_t> support = {anc_q(st.xlegs[0]), data_q(st.xlegs[0]),
                                                 anc_q(st.xlegs[1]), data_q(st.xlegs[1])};
                std::sort(support.begin(), support.end());
                s_rec[k] = c.mppz(support);
                c.flip_result(mpp_flip);
            }
            noise_alive();
            c.tick();

            for (size_t k = 0; k < todo.size(); k++) {
                const Stab& st = stabs[todo[k]];
                uint32_t u1 = st.xlegs[0], u2 = st.xlegs[1];
                std::vector<uint32_t> sstar = {s_rec[k]};
                xor_into(sstar, fx[u1]);
                xor_into(sstar, fx[u2]);

                std::vector<uint32_t> sigma;
                uint32_t legs[2] = {u1, u2};
                for (int e = 0; e < 2; e++) {
                    uint32_t u = legs[e];
                    uint32_t m = c.mx(data_q(u));
                    c.flip_result(mx_flip);
                    alive[data_q(u)] = 0;
                    std::vector<uint32_t> mstar = {m};
                    xor_into(mstar, fz[u]);
                    xor_into(sigma, mstar);
                    cur[u] = 1 - cur[u];
                    fz[u] = std::move(mstar);
                    fx[u].clear();
                }
                fx[u1] = sstar;

                size_t si = todo[k];
                if (have_prev[si]) {
                    c.detector_abs(xor_set(sigma, prev_sigma[si]));
                } else if (st.site_type == plus) {
                    c.detector_abs(sigma);
                }
                prev_sigma[si] = std::move(sigma);
                have_prev[si] = 1;
            }
            // Closing CZs from the teleported X legs back to the Z legs;
            // these exchange the fresh X corrections into partner Z frames.
            for (size_t i : todo) {
                for (auto [u, w] : stabs[i].pairs) {
                    c.cz(data_q(u), data_q(w));
                    xor_into(fz[w], fx[u]);
                    xor_into(fz[u], fx[w]);
                }
            }
            noise_alive();
            c.tick();
        }
    }

    // Transversal readout: H sites in the memory basis, V conjugate, E in X.
    std::vector<uint32_t> frec(L.sites());
    for (uint32_t s = 0; s < L.sites(); s++) {
        bool x_basis = L.is_h(s) ? plus : !plus;
        if (L.is_e(s)) x_basis = true;
        frec[s] = x_basis ? c.mx(data_q(s)) : c.mz(data_q(s));
        c.flip_result(x_basis ? mx_flip : mpp_flip);
    }
    auto final_x_value = [&](uint32_t u) {
        std::vector<uint32_t> v = {frec[u]};
        xor_into(v, fz[u]);
        return v;
    };
    auto final_z_value = [&](uint32_t w) {
        std::vector<uint32_t> v = {frec[w]};
        xor_into(v, fx[w]);
        return v;
    };

    for (size_t si = 0; si < stabs.size(); si++) {
        const Stab& st = stabs[si];
        if (st.site_type != plus) continue;
        std::vector<uint32_t> sigma;
        for (uint32_t u : st.xlegs) xor_into(sigma, final_x_value(u));
        for (uint32_t w : st.zlegs) xor_into(sigma, final_z_value(w));
        c.detector_abs(xor_set(sigma, prev_sigma[si]));
    }

    std::vector<uint32_t> obs;
    if (plus) {
        for (uint32_t b = 0; b < dx; b++) xor_into(obs, final_x_value(L.H(0, b)));
    } else {
        for (uint32_t a = 0; a < dz; a++) xor_into(obs, final_z_value(L.H(a, 0)));
    }
    c.observable_abs(0, obs);
    return out;
}

}  // namespace biasq
