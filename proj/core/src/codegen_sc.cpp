#include <numeric>
#include <stdexcept>

#include "biasq/codegen_internal.hpp"

namespace biasq {

using detail::xor_into;
using detail::xor_set;

namespace {

struct Anc {
    uint32_t qubit;
    bool xtype;
    std::vector<int32_t> data;  // data qubit per CX step, -1 when absent
};

}  // namespace

// Rotated d x d surface code with a depolarizing two-qubit gate, the
// bias-unaware baseline. X ancillas drive CX fan-out from |+>, Z ancillas
// collect CX fan-in into |0>.
GeneratedCircuit build_rotated_sc_depolcx(const CodeSpec& spec, const NoiseParams& noise) {
    uint32_t d = spec.d;
    if (d < 3 || d % 2 == 0) throw std::invalid_argument("distance must be odd and >= 3");
    if (spec.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    bool plus = spec.memory == MemoryBasis::PlusMemory;

    const double pz = noise.pz, px = noise.px(), pcx = noise.pcx();
    GeneratedCircuit out;
    out.spec = spec;
    out.footprint = {2 * d * d - 1, 6};
    Circuit& c = out.circuit;
    c.qubit_count = 2 * d * d - 1;

    auto data_idx = [&](uint32_t r, uint32_t col) { return r * d + col; };
    std::vector<uint32_t> data_qs(d * d);
    std::iota(data_qs.begin(), data_qs.end(), 0);

    // Ancillas on the dual grid (x, y) in 0..d; X type needs 0 < y < d,
    // Z type needs 0 < x < d, checkerboarded by (x + y) parity.
    std::vector<Anc> ancs;
    uint32_t next_q = d * d;
    // CX step offsets in dual-grid units; X and Z orders zigzag differently
    // so neighbouring stabilizer pairs interleave consistently.
    const int ox[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    const int oz[4][2] = {{1, 1}, {-1, 1}, {1, -1}, {-1, -1}};
    for (uint32_t x = 0; x <= d; x++) {
        for (uint32_t y = 0; y <= d; y++) {
            bool xtype = ((x + y) % 2 == 1);
            if (xtype && (y == 0 || y == d)) continue;
            if (!xtype && (x == 0 || x == d)) continue;
            Anc a;
            a.qubit = next_q++;
            a.xtype = xtype;
            for (int s = 0; s < 4; s++) {
                int dxs = xtype ? ox[s][0] : oz[s][0];
                int dys = xtype ? ox[s][1] : oz[s][1];
                int r = int(x) + (dxs - 1) / 2;      // data row index from dual coord
                int col = int(y) + (dys - 1) / 2;
                if (r < 0 || r >= int(d) || col < 0 || col >= int(d)) {
                    a.data.push_back(-1);
                } else {
                    a.data.push_back(int(data_idx(uint32_t(r), uint32_t(col))));
                }
            }
            ancs.push_back(std::move(a));
        }
    }
    if (ancs.size() != d * d - 1) throw std::logic_error("rotated layout ancilla count");

    std::vector<std::vector<uint32_t>> prev(ancs.size());
    std::vector<char> have_prev(ancs.size(), 0);

    auto idle_noise = [&](const std::vector<uint32_t>& busy) {
        std::vector<char> is_busy(c.qubit_count, 0);
        for (uint32_t q : busy) is_busy[q] = 1;
        std::vector<uint32_t> idle;
        for (uint32_t q = 0; q < c.qubit_count; q++)
            if (!is_busy[q]) idle.push_back(q);
        c.biased_pauli1(idle, px / 2, px / 2, pz);
    };

    if (plus) c.rx(data_qs);
    else c.rz(data_qs);
    c.biased_pauli1(data_qs, px / 2, px / 2, pz);
    c.tick();

    for (uint32_t t = 0; t < spec.rounds; t++) {
        // Reset layer.
        std::vector<uint32_t> xa, za, all_anc;
        for (auto& a : ancs) {
            (a.xtype ? xa : za).push_back(a.qubit);
            all_anc.push_back(a.qubit);
        }
        c.rx(xa);
        c.rz(za);
        c.biased_pauli1(all_anc, px / 2, px / 2, pz);
        idle_noise(all_anc);
        c.tick();

        // Four CX layers.
        for (int s = 0; s < 4; s++) {
            std::vector<uint32_t> busy;
            for (auto& a : ancs) {
                if (a.data[s] < 0) continue;
                uint32_t dq = uint32_t(a.data[s]);
                if (a.xtype) c.cx(a.qubit, dq);
                else c.cx(dq, a.qubit);
                c.depolarize2(a.qubit, dq, pcx);
                busy.push_back(a.qubit);
                busy.push_back(dq);
            }
            idle_noise(busy);
            c.tick();
        }

        // Measurement layer.
        for (size_t i = 0; i < ancs.size(); i++) {
            auto& a = ancs[i];
            uint32_t m = a.xtype ? c.mx(a.qubit) : c.mz(a.qubit);
            c.flip_result(a.xtype ? pz : px);
            std::vector<uint32_t> sigma = {m};
            if (have_prev[i]) {
                c.detector_abs(xor_set(sigma, prev[i]));
            } else if (a.xtype == plus) {
                c.detector_abs(sigma);
            }
            prev[i] = std::move(sigma);
            have_prev[i] = 1;
        }
        idle_noise(all_anc);
        c.tick();
    }

    // Transversal readout in the memory basis plus final stabilizer anchors.
    std::vector<uint32_t> frec(d * d);
    for (uint32_t q = 0; q < d * d; q++) {
        frec[q] = plus ? c.mx(q) : c.mz(q);
        c.flip_result(plus ? pz : px);
    }
    for (size_t i = 0; i < ancs.size(); i++) {
        auto& a = ancs[i];
        if (a.xtype != plus) continue;
        std::vector<uint32_t> sigma = prev[i];
        for (int32_t dq : a.data)
            if (dq >= 0) xor_into(sigma, frec[uint32_t(dq)]);
        c.detector_abs(sigma);
    }
    // The logical X string runs along a column of the dual grid, the logical
    // Z string along a row (each crosses the opposite-type half-plaquettes
    // evenly).
    std::vector<uint32_t> obs;
    for (uint32_t k = 0; k < d; k++)
        xor_into(obs, plus ? frec[data_idx(k, 0)] : frec[data_idx(0, k)]);
    c.observable_abs(0, obs);
    return out;
}

}  // namespace biasq
