#include <numeric>
#include <stdexcept>

#include "biasq/codegen_internal.hpp"

namespace biasq {

using detail::xor_into;
using detail::xor_set;

namespace {

void check_rep_spec(const CodeSpec& spec, bool allow_zero_memory) {
    if (spec.d < 3 || spec.d % 2 == 0)
        throw std::invalid_argument("repetition code distance must be odd and >= 3");
    if (spec.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (!allow_zero_memory && spec.memory != MemoryBasis::PlusMemory)
        throw std::invalid_argument("repetition families implement the |+> memory only");
}

std::vector<uint32_t> all_qubits(uint32_t n) {
    std::vector<uint32_t> qs(n);
    std::iota(qs.begin(), qs.end(), 0);
    return qs;
}

std::vector<uint32_t> complement(uint32_t n, std::vector<uint32_t> taken) {
    std::sort(taken.begin(), taken.end());
    std::vector<uint32_t> out;
    for (uint32_t q = 0; q < n; q++)
        if (!std::binary_search(taken.begin(), taken.end(), q)) out.push_back(q);
    return out;
}

// Shared body of the alternated-schedule builder; diag switches the memory
// to the Z basis so the teleport X-frame bookkeeping becomes record-checkable.
GeneratedCircuit build_alternated(const CodeSpec& spec, const NoiseParams& noise, bool diag) {
    check_rep_spec(spec, diag);
    uint32_t d = spec.d, n = 2 * d;
    double px = noise.px(), pz = noise.pz;

    GeneratedCircuit out;
    out.spec = spec;
    out.footprint = {n, 4};
    Circuit& c = out.circuit;
    c.qubit_count = n;

    std::vector<uint32_t> pos(d);
    for (uint32_t i = 0; i < d; i++) pos[i] = 2 * i + 1;
    std::vector<std::vector<uint32_t>> zf(d);
    std::vector<uint32_t> rstar;
    std::vector<std::vector<uint32_t>> prev_sigma(d - 1);
    std::vector<char> have_prev(d - 1, 0);

    if (diag) {
        // Zero-basis memory, but the teleport ancillas still start in |+>.
        c.rz(pos);
        c.rx(complement(n, pos));
    } else {
        c.rx(all_qubits(n));
    }
    c.tick();

    for (uint32_t t = 0; t < spec.rounds; t++) {
        for (uint32_t parity = 0; parity < 2; parity++) {
            std::vector<uint32_t> stabs;
            for (uint32_t s = parity; s + 1 < d; s += 2) stabs.push_back(s);

            // Z^4 layer: one joint measurement per stabilizer in this step.
            std::vector<uint32_t> s_recs(stabs.size());
            for (size_t k = 0; k < stabs.size(); k++) {
                uint32_t s = stabs[k];
                std::vector<uint32_t> block = {2 * s, 2 * s + 1, 2 * s + 2, 2 * s + 3};
                s_recs[k] = c.mppz(block);
                c.flip_result(px);
                xor_into(rstar, s_recs[k]);
            }
            out.noise_layer_slot_positions.push_back(pos);
            c.biased_pauli1(all_qubits(n), px / 2, px / 2, pz);
            c.tick();

            // Teleport layer: measure the moving data in X, reinit as ancillas.
            std::vector<uint32_t> measured;
            for (size_t k = 0; k < stabs.size(); k++) {
                uint32_t s = stabs[k];
                uint32_t i = s, j = s + 1;
                std::vector<uint32_t> block = {2 * s, 2 * s + 1, 2 * s + 2, 2 * s + 3};
                std::vector<uint32_t> anc;
                for (uint32_t q : block)
                    if (q != pos[i] && q != pos[j]) anc.push_back(q);

                uint32_t ma = c.mx(pos[i]);
                c.flip_result(pz);
                uint32_t mb = c.mx(pos[j]);
                c.flip_result(pz);
                measured.push_back(pos[i]);
                measured.push_back(pos[j]);

                std::vector<uint32_t> sigma = xor_set(zf[i], zf[j]);
                xor_into(sigma, ma);
                xor_into(sigma, mb);

                xor_into(zf[i], ma);
                xor_into(zf[j], mb);
                pos[i] = anc[0];
                pos[j] = anc[1];

                if (have_prev[s]) {
                    c.detector_abs(xor_set(sigma, prev_sigma[s]));
                } else if (!diag) {
                    c.detector_abs(sigma);
                }
                prev_sigma[s] = std::move(sigma);
                have_prev[s] = 1;
            }
            c.rx(measured);
            out.noise_layer_slot_positions.push_back(pos);
            c.biased_pauli1(complement(n, measured), px / 2, px / 2, pz);
            c.tick();
        }
    }

    // Transversal readout.
    std::vector<uint32_t> frec(d);
    for (uint32_t i = 0; i < d; i++) {
        frec[i] = diag ? c.mz(pos[i]) : c.mx(pos[i]);
        c.flip_result(pz);
    }
    if (!diag) {
        for (uint32_t s = 0; s + 1 < d; s++) {
            std::vector<uint32_t> sigma = xor_set(zf[s], zf[s + 1]);
            xor_into(sigma, frec[s]);
            xor_into(sigma, frec[s + 1]);
            c.detector_abs(xor_set(sigma, prev_sigma[s]));
        }
        std::vector<uint32_t> obs = zf[0];
        xor_into(obs, frec[0]);
        c.observable_abs(0, obs);
        FrameObservable floor_obs;
        floor_obs.index = 1;
        floor_obs.records = rstar;
        floor_obs.end_x_parity = pos;
        out.frame_observables.push_back(std::move(floor_obs));
    } else {
        std::vector<uint32_t> obs = rstar;
        for (uint32_t i = 0; i < d; i++) xor_into(obs, frec[i]);
        c.observable_abs(0, obs);
    }
    return out;
}

GeneratedCircuit build_simultaneous(const CodeSpec& spec, const NoiseParams& noise, bool diag) {
    check_rep_spec(spec, diag);
    uint32_t d = spec.d, n = 3 * d - 2;
    double px = noise.px(), pz = noise.pz;

    GeneratedCircuit out;
    out.spec = spec;
    out.footprint = {n, 2};
    Circuit& c = out.circuit;
    c.qubit_count = n;

    std::vector<uint32_t> pos(d);
    for (uint32_t i = 0; i + 1 < d; i += 2) {
        uint32_t k = i / 2;
        pos[i] = 6 * k + 1;
        pos[i + 1] = 6 * k + 2;
    }
    pos[d - 1] = 3 * d - 3;

    std::vector<std::vector<uint32_t>> zf(d);
    std::vector<uint32_t> rstar;
    std::vector<std::vector<uint32_t>> prev_sigma(d - 1);
    std::vector<char> have_prev(d - 1, 0);

    if (diag) {
        c.rz(pos);
        c.rx(complement(n, pos));
    } else {
        c.rx(all_qubits(n));
    }
    c.tick();

    for (uint32_t t = 0; t < spec.rounds; t++) {
        std::vector<char> busy(n, 0);
        for (uint32_t i = 0; i < d; i++) busy[pos[i]] = 1;

        struct Gadget {
            uint32_t stab;
            uint32_t in_lo, in_hi;    // vacated positions (measured later)
            uint32_t s_rec;
        };
        std::vector<Gadget> gadgets;

        auto alloc_pair = [&]() {
            std::vector<uint32_t> got;
            for (uint32_t q = 0; q < n && got.size() < 2; q++)
                if (!busy[q]) {
                    busy[q] = 1;
                    got.push_back(q);
                }
            if (got.size() < 2) throw std::logic_error("ancilla pool exhausted");
            return got;
        };

        // All d-1 stabilizers within one round: even pairs first, then odd
        // pairs chained through the freshly teleported positions.
        for (uint32_t parity = 0; parity < 2; parity++) {
            for (uint32_t s = parity; s + 1 < d; s += 2) {
                uint32_t i = s, j = s + 1;
                auto anc = alloc_pair();
                std::vector<uint32_t> support = {anc[0], pos[i], anc[1], pos[j]};
                std::sort(support.begin(), support.end());
                Gadget g;
                g.stab = s;
                g.in_lo = pos[i];
                g.in_hi = pos[j];
                g.s_rec = c.mppz(support);
                c.flip_result(px);
                xor_into(rstar, g.s_rec);
                pos[i] = anc[0];
                pos[j] = anc[1];
                gadgets.push_back(g);
            }
        }
        out.noise_layer_slot_positions.push_back(pos);
        c.biased_pauli1(all_qubits(n), px / 2, px / 2, pz);
        c.tick();

        // One X-measurement layer completes every teleport of the round.
        std::vector<uint32_t> measured;
        for (auto& g : gadgets) {
            uint32_t i = g.stab, j = g.stab + 1;
            uint32_t ma = c.mx(g.in_lo);
            c.flip_result(pz);
            uint32_t mb = c.mx(g.in_hi);
            c.flip_result(pz);
            measured.push_back(g.in_lo);
            measured.push_back(g.in_hi);

            std::vector<uint32_t> sigma = xor_set(zf[i], zf[j]);
            xor_into(sigma, ma);
            xor_into(sigma, mb);
            xor_into(zf[i], ma);
            xor_into(zf[j], mb);

            if (have_prev[g.stab]) {
                c.detector_abs(xor_set(sigma, prev_sigma[g.stab]));
            } else if (!diag) {
                c.detector_abs(sigma);
            }
            prev_sigma[g.stab] = std::move(sigma);
            have_prev[g.stab] = 1;
        }
        c.rx(measured);
        out.noise_layer_slot_positions.push_back(pos);
        c.biased_pauli1(complement(n, measured), px / 2, px / 2, pz);
        c.tick();
    }

    std::vector<uint32_t> frec(d);
    for (uint32_t i = 0; i < d; i++) {
        frec[i] = diag ? c.mz(pos[i]) : c.mx(pos[i]);
        c.flip_result(pz);
    }
    if (!diag) {
        for (uint32_t s = 0; s + 1 < d; s++) {
            std::vector<uint32_t> sigma = xor_set(zf[s], zf[s + 1]);
            xor_into(sigma, frec[s]);
            xor_into(sigma, frec[s + 1]);
            c.detector_abs(xor_set(sigma, prev_sigma[s]));
        }
        std::vector<uint32_t> obs = zf[0];
        xor_into(obs, frec[0]);
        c.observable_abs(0, obs);
        FrameObservable floor_obs;
        floor_obs.index = 1;
        floor_obs.records = rstar;
        floor_obs.end_x_parity = pos;
        out.frame_observables.push_back(std::move(floor_obs));
    } else {
        std::vector<uint32_t> obs = rstar;
        for (uint32_t i = 0; i < d; i++) xor_into(obs, frec[i]);
        c.observable_abs(0, obs);
    }
    return out;
}

GeneratedCircuit build_bpcnot(const CodeSpec& spec, const NoiseParams& noise, bool diag) {
    check_rep_spec(spec, diag);
    uint32_t d = spec.d, n = 2 * d - 1;
    double px = noise.px(), pz = noise.pz;
    std::vector<Pauli2Term> cx_channel = {
        {'I', 'Z', 2 * pz / 3}, {'Z', 'I', 2 * pz / 3}, {'Z', 'Z', 2 * pz / 3},
        {'I', 'X', 2 * px / 3}, {'X', 'I', 2 * px / 3}, {'X', 'X', 2 * px / 3},
    };

    GeneratedCircuit out;
    out.spec = spec;
    out.footprint = {n, 3};
    Circuit& c = out.circuit;
    c.qubit_count = n;

    auto data_q = [](uint32_t i) { return 2 * i; };
    auto anc_q = [](uint32_t s) { return 2 * s + 1; };
    std::vector<uint32_t> data_qs, anc_qs;
    for (uint32_t i = 0; i < d; i++) data_qs.push_back(data_q(i));
    for (uint32_t s = 0; s + 1 < d; s++) anc_qs.push_back(anc_q(s));

    std::vector<std::vector<uint32_t>> prev(d - 1);
    std::vector<char> have_prev(d - 1, 0);

    if (diag) c.rz(data_qs);
    else c.rx(data_qs);
    c.rx(anc_qs);
    c.tick();

    for (uint32_t t = 0; t < spec.rounds; t++) {
        // CX layer 1: each ancilla to its left data qubit.
        for (uint32_t s = 0; s + 1 < d; s++) {
            c.cx(anc_q(s), data_q(s));
            c.pauli2(anc_q(s), data_q(s), cx_channel);
        }
        out.noise_layer_slot_positions.push_back({data_q(d - 1)});
        c.biased_pauli1({data_q(d - 1)}, px / 2, px / 2, pz);
        c.tick();
        // CX layer 2: each ancilla to its right data qubit.
        for (uint32_t s = 0; s + 1 < d; s++) {
            c.cx(anc_q(s), data_q(s + 1));
            c.pauli2(anc_q(s), data_q(s + 1), cx_channel);
        }
        out.noise_layer_slot_positions.push_back({data_q(0)});
        c.biased_pauli1({data_q(0)}, px / 2, px / 2, pz);
        c.tick();
        // MRX layer: readout plus reinit of every ancilla; all data idle.
        for (uint32_t s = 0; s + 1 < d; s++) {
            uint32_t m = c.mx(anc_q(s));
            c.flip_result(pz);
            std::vector<uint32_t> sigma = {m};
            if (have_prev[s]) {
                c.detector_abs(xor_set(sigma, prev[s]));
            } else if (!diag) {
                c.detector_abs(sigma);
            }
            prev[s] = std::move(sigma);
            have_prev[s] = 1;
        }
        c.rx(anc_qs);
        out.noise_layer_slot_positions.push_back(data_qs);
        c.biased_pauli1(data_qs, px / 2, px / 2, pz);
        c.tick();
    }

    std::vector<uint32_t> frec(d);
    for (uint32_t i = 0; i < d; i++) {
        frec[i] = diag ? c.mz(data_q(i)) : c.mx(data_q(i));
        c.flip_result(pz);
    }
    if (!diag) {
        for (uint32_t s = 0; s + 1 < d; s++) {
            std::vector<uint32_t> sigma = {frec[s]};
            xor_into(sigma, frec[s + 1]);
            c.detector_abs(xor_set(sigma, prev[s]));
        }
        c.observable_abs(0, {frec[0]});
        FrameObservable floor_obs;
        floor_obs.index = 1;
        floor_obs.end_x_parity = data_qs;
        out.frame_observables.push_back(std::move(floor_obs));
    } else {
        std::vector<uint32_t> obs;
        for (uint32_t i = 0; i < d; i++) xor_into(obs, frec[i]);
        c.observable_abs(0, obs);
    }
    return out;
}

}  // namespace

GeneratedCircuit build_rep_mz4_alternated(const CodeSpec& spec, const NoiseParams& noise) {
    return build_alternated(spec, noise, false);
}
GeneratedCircuit build_rep_mz4_simultaneous(const CodeSpec& spec, const NoiseParams& noise) {
    return build_simultaneous(spec, noise, false);
}
GeneratedCircuit build_rep_bpcnot(const CodeSpec& spec, const NoiseParams& noise) {
    return build_bpcnot(spec, noise, false);
}

namespace detail {
GeneratedCircuit build_rep_mz4_alternated_diag_zero(const CodeSpec& spec, const NoiseParams& noise) {
    return build_alternated(spec, noise, true);
}
GeneratedCircuit build_rep_mz4_simultaneous_diag_zero(const CodeSpec& spec, const NoiseParams& noise) {
    return build_simultaneous(spec, noise, true);
}
GeneratedCircuit build_rep_bpcnot_diag_zero(const CodeSpec& spec, const NoiseParams& noise) {
    return build_bpcnot(spec, noise, true);
}
}  // namespace detail

}  // namespace biasq
