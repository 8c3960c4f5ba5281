#include <numeric>
#include <stdexcept>

#include "biasq/codegen_internal.hpp"

namespace biasq {

using detail::xor_into;
using detail::xor_set;

namespace {

// Appendix-style pure phase noise: every aliveness moment dephases idle and
// single-qubit-op qubits; CZ gates carry their own two-qubit channel.
struct ZNoise {
    Circuit& c;
    double pz;
    std::vector<char>& alive;

    void moment(const std::vector<uint32_t>& skip = {}) {
        std::vector<char> sk(alive.size(), 0);
        for (uint32_t q : skip) sk[q] = 1;
        std::vector<uint32_t> qs;
        for (uint32_t q = 0; q < alive.size(); q++)
            if (alive[q] && !sk[q]) qs.push_back(q);
        c.biased_pauli1(qs, 0, 0, pz);
    }
};

std::vector<Pauli2Term> cz_channel(double pz) {
    return {{'I', 'Z', 2 * pz / 3}, {'Z', 'I', 2 * pz / 3}, {'Z', 'Z', 2 * pz / 3}};
}

}  // namespace

// Repetition code whose XX checks use the teleporting Z^4 gadget, with each
// Z^4 realized as r repeated meter readouts through four CZ gates.
GeneratedCircuit build_rep_cz_physical(const CodeSpec& spec, const NoiseParams& noise) {
    uint32_t d = spec.d;
    if (d < 2) throw std::invalid_argument("distance must be >= 2");
    if (spec.r < 1) throw std::invalid_argument("r must be >= 1");
    if (spec.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (spec.memory != MemoryBasis::PlusMemory)
        throw std::invalid_argument("plus memory only");
    double pz = noise.pz;
    uint32_t meters = d / 2;
    uint32_t n = 2 * d + meters;

    GeneratedCircuit out;
    out.spec = spec;
    out.footprint = {n, 2 * (6 * spec.r + 1)};
    Circuit& c = out.circuit;
    c.qubit_count = n;

    std::vector<uint32_t> pos(d);
    for (uint32_t i = 0; i < d; i++) pos[i] = 2 * i + 1;
    std::vector<std::vector<uint32_t>> zf(d);
    std::vector<std::vector<uint32_t>> prev_sigma(d - 1);
    std::vector<char> have_prev(d - 1, 0);
    std::vector<char> alive(n, 0);
    ZNoise nz{c, pz, alive};

    std::vector<uint32_t> init(2 * d);
    std::iota(init.begin(), init.end(), 0);
    for (uint32_t q : init) alive[q] = 1;
    c.rx(init);
    nz.moment();
    c.tick();

    for (uint32_t t = 0; t < spec.rounds; t++) {
        for (uint32_t parity = 0; parity < 2; parity++) {
            std::vector<uint32_t> stabs;
            for (uint32_t s = parity; s + 1 < d; s += 2) stabs.push_back(s);
            if (stabs.empty()) continue;

            // r repeated meter readouts of each Z^4.
            std::vector<std::vector<uint32_t>> meter_recs(stabs.size());
            for (uint32_t rep = 0; rep < spec.r; rep++) {
                std::vector<uint32_t> ms;
                for (size_t k = 0; k < stabs.size(); k++) {
                    uint32_t mq = 2 * d + uint32_t(k);
                    ms.push_back(mq);
                    alive[mq] = 1;
                }
                c.rx(ms);
                nz.moment();
                c.tick();
                for (uint32_t leg = 0; leg < 4; leg++) {
                    std::vector<uint32_t> busy;
                    for (size_t k = 0; k < stabs.size(); k++) {
                        uint32_t s = stabs[k];
                        uint32_t block[4] = {2 * s, 2 * s + 1, 2 * s + 2, 2 * s + 3};
                        uint32_t mq = 2 * d + uint32_t(k);
                        c.cz(block[leg], mq);
                        c.pauli2(block[leg], mq, cz_channel(pz));
                        busy.push_back(block[leg]);
                        busy.push_back(mq);
                    }
                    nz.moment(busy);
                    c.tick();
                }
                for (size_t k = 0; k < stabs.size(); k++) {
                    uint32_t mq = 2 * d + uint32_t(k);
                    uint32_t o = c.mx(mq);
                    alive[mq] = 0;
                    meter_recs[k].push_back(o);
                    if (rep > 0) c.detector_abs({meter_recs[k][rep - 1], o});
                }
                nz.moment();
                c.tick();
            }

            // Teleporting X readouts complete the XX checks; the vacated
            // qubits are reprepared as the next targets.
            std::vector<uint32_t> vacated;
            for (size_t k = 0; k < stabs.size(); k++) {
                uint32_t s = stabs[k];
                uint32_t i = s, j = s + 1;
                uint32_t block[4] = {2 * s, 2 * s + 1, 2 * s + 2, 2 * s + 3};
                std::vector<uint32_t> anc;
                for (uint32_t q : block)
                    if (q != pos[i] && q != pos[j]) anc.push_back(q);

                uint32_t ma = c.mx(pos[i]);
                uint32_t mb = c.mx(pos[j]);
                vacated.push_back(pos[i]);
                vacated.push_back(pos[j]);

                std::vector<uint32_t> sigma = xor_set(zf[i], zf[j]);
                xor_into(sigma, ma);
                xor_into(sigma, mb);
                xor_into(zf[i], ma);
                xor_into(zf[j], mb);
                pos[i] = anc[0];
                pos[j] = anc[1];

                if (have_prev[s]) c.detector_abs(xor_set(sigma, prev_sigma[s]));
                else c.detector_abs(sigma);
                prev_sigma[s] = std::move(sigma);
                have_prev[s] = 1;
            }
            c.rx(vacated);
            nz.moment();
            c.tick();
        }
    }

    std::vector<uint32_t> frec(d);
    for (uint32_t i = 0; i < d; i++) frec[i] = c.mx(pos[i]);
    for (uint32_t s = 0; s + 1 < d; s++) {
        std::vector<uint32_t> sigma = xor_set(zf[s], zf[s + 1]);
        xor_into(sigma, frec[s]);
        xor_into(sigma, frec[s + 1]);
        c.detector_abs(xor_set(sigma, prev_sigma[s]));
    }
    std::vector<uint32_t> obs = zf[0];
    xor_into(obs, frec[0]);
    c.observable_abs(0, obs);
    return out;
}

// Knill-style teleportation error correction: the logical qubit hops between
// two repetition blocks through a GHZ-mediated joint Z_L Z_L measurement
// (r1-fold repeated ZZ checks inside each GHZ prep, r2-fold repeated logical
// readouts), followed by a transversal X measurement of the source block.
GeneratedCircuit build_rep_cz_knill(const CodeSpec& spec, const NoiseParams& noise) {
    uint32_t d = spec.d;
    if (d < 3 || d % 2 == 0) throw std::invalid_argument("distance must be odd and >= 3");
    if (spec.r1 < 1 || spec.r2 < 1) throw std::invalid_argument("r1, r2 must be >= 1");
    if (spec.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (spec.memory != MemoryBasis::PlusMemory)
        throw std::invalid_argument("plus memory only");
    double pz = noise.pz;
    uint32_t n = 4 * d - 1;

    GeneratedCircuit out;
    out.spec = spec;
    out.footprint = {n, spec.r2 * (4 * spec.r1 + 4) + 2};
    Circuit& c = out.circuit;
    c.qubit_count = n;

    auto block_q = [&](uint32_t b, uint32_t i) { return b * d + i; };
    auto meter_q = [&](uint32_t i) { return 2 * d + i; };
    auto zz_q = [&](uint32_t i) { return 3 * d + i; };

    std::vector<char> alive(n, 0);
    ZNoise nz{c, pz, alive};

    // stab_dress[b][i]: pending GHZ ZZ records dressing X_i X_{i+1} of block b.
    std::vector<std::vector<std::vector<uint32_t>>> stab_dress(
        2, std::vector<std::vector<uint32_t>>(d - 1));
    std::vector<uint32_t> logical_reads;  // x_0 record of every teleport
    std::vector<uint32_t> rstar_zz;       // first logical ZZ readout per teleport

    uint32_t src = 0;
    {
        std::vector<uint32_t> init(d);
        for (uint32_t i = 0; i < d; i++) {
            init[i] = block_q(src, i);
            alive[init[i]] = 1;
        }
        c.rx(init);
        nz.moment();
        c.tick();
    }

    for (uint32_t t = 0; t < spec.rounds; t++) {
        uint32_t dst = 1 - src;
        {
            std::vector<uint32_t> init(d);
            for (uint32_t i = 0; i < d; i++) {
                init[i] = block_q(dst, i);
                alive[init[i]] = 1;
            }
            c.rx(init);
            for (auto& sd : stab_dress[dst]) sd.clear();
            nz.moment();
            c.tick();
        }

        std::vector<uint32_t> prev_mm;
        for (uint32_t rep2 = 0; rep2 < spec.r2; rep2++) {
            // GHZ prep on the meter register.
            {
                std::vector<uint32_t> ms(d);
                for (uint32_t i = 0; i < d; i++) {
                    ms[i] = meter_q(i);
                    alive[ms[i]] = 1;
                }
                c.rx(ms);
                nz.moment();
                c.tick();
            }
            std::vector<std::vector<uint32_t>> zz_recs(d - 1);
            for (uint32_t rep1 = 0; rep1 < spec.r1; rep1++) {
                std::vector<uint32_t> zs(d - 1);
                for (uint32_t i = 0; i + 1 < d; i++) {
                    zs[i] = zz_q(i);
                    alive[zs[i]] = 1;
                }
                c.rx(zs);
                nz.moment();
                c.tick();
                std::vector<uint32_t> busy;
                for (uint32_t i = 0; i + 1 < d; i++) {
                    c.cz(meter_q(i), zz_q(i));
                    c.pauli2(meter_q(i), zz_q(i), cz_channel(pz));
                    busy.push_back(meter_q(i));
                    busy.push_back(zz_q(i));
                }
                nz.moment(busy);
                c.tick();
                busy.clear();
                for (uint32_t i = 0; i + 1 < d; i++) {
                    c.cz(meter_q(i + 1), zz_q(i));
                    c.pauli2(meter_q(i + 1), zz_q(i), cz_channel(pz));
                    busy.push_back(meter_q(i + 1));
                    busy.push_back(zz_q(i));
                }
                nz.moment(busy);
                c.tick();
                for (uint32_t i = 0; i + 1 < d; i++) {
                    uint32_t o = c.mx(zz_q(i));
                    alive[zz_q(i)] = 0;
                    zz_recs[i].push_back(o);
                    if (rep1 > 0) c.detector_abs({zz_recs[i][rep1 - 1], o});
                }
                nz.moment();
                c.tick();
            }

            // Joint logical ZZ via transversal CZ to both blocks, then a
            // transversal X readout of the meter.
            for (uint32_t b : {src, dst}) {
                std::vector<uint32_t> busy;
                for (uint32_t i = 0; i < d; i++) {
                    c.cz(meter_q(i), block_q(b, i));
                    c.pauli2(meter_q(i), block_q(b, i), cz_channel(pz));
                    busy.push_back(meter_q(i));
                    busy.push_back(block_q(b, i));
                }
                nz.moment(busy);
                c.tick();
                // The CZ layer dresses the block's XX checks with the GHZ's
                // last ZZ values.
                for (uint32_t i = 0; i + 1 < d; i++)
                    xor_into(stab_dress[b][i], zz_recs[i].back());
            }
            std::vector<uint32_t> mm(d);
            for (uint32_t i = 0; i < d; i++) {
                mm[i] = c.mx(meter_q(i));
                alive[meter_q(i)] = 0;
            }
            nz.moment();
            c.tick();
            if (rep2 == 0) {
                for (uint32_t i = 0; i < d; i++) xor_into(rstar_zz, mm[i]);
            } else {
                // Consecutive logical readouts agree.
                std::vector<uint32_t> det;
                for (uint32_t i = 0; i < d; i++) xor_into(det, mm[i]);
                for (uint32_t i = 0; i < d; i++) xor_into(det, prev_mm[i]);
                c.detector_abs(det);
            }
            prev_mm = mm;
        }

        // Transversal X readout of the source block.
        std::vector<uint32_t> xr(d);
        for (uint32_t i = 0; i < d; i++) {
            xr[i] = c.mx(block_q(src, i));
            alive[block_q(src, i)] = 0;
        }
        nz.moment();
        c.tick();
        for (uint32_t i = 0; i + 1 < d; i++) {
            std::vector<uint32_t> det = stab_dress[src][i];
            xor_into(det, xr[i]);
            xor_into(det, xr[i + 1]);
            c.detector_abs(det);
        }
        logical_reads.push_back(xr[0]);
        src = dst;
    }

    std::vector<uint32_t> frec(d);
    for (uint32_t i = 0; i < d; i++) frec[i] = c.mx(block_q(src, i));
    for (uint32_t i = 0; i + 1 < d; i++) {
        std::vector<uint32_t> det = stab_dress[src][i];
        xor_into(det, frec[i]);
        xor_into(det, frec[i + 1]);
        c.detector_abs(det);
    }
    std::vector<uint32_t> obs = {frec[0]};
    for (uint32_t r : logical_reads) xor_into(obs, r);
    c.observable_abs(0, obs);

    FrameObservable vobs;
    vobs.index = 1;
    vobs.records = rstar_zz;
    out.frame_observables.push_back(std::move(vobs));
    return out;
}

}  // namespace biasq
