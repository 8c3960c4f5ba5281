#include "biasq/sampler.hpp"

#include <cstring>
#include <stdexcept>
#include <thread>

namespace biasq {

FrameSimulator::FrameSimulator(const Circuit& c, const std::vector<FrameObservable>& extra)
    : c_(c), extra_(extra) {
    detector_count_ = c.detector_count();
    observable_count_ = c.observable_count();
    for (const auto& fo : extra_)
        observable_count_ = std::max(observable_count_, fo.index + 1);
    words_ = (c.qubit_count + 63) / 64;
    frame_x_.assign(words_, 0);
    frame_z_.assign(words_, 0);
    record_.assign(c.measurement_count(), 0);
}

static inline bool get_bit(const std::vector<uint64_t>& v, uint32_t q) {
    return (v[q >> 6] >> (q & 63)) & 1;
}
static inline void flip_bit(std::vector<uint64_t>& v, uint32_t q) {
    v[q >> 6] ^= uint64_t(1) << (q & 63);
}
static inline void clear_bit(std::vector<uint64_t>& v, uint32_t q) {
    v[q >> 6] &= ~(uint64_t(1) << (q & 63));
}

void FrameSimulator::run_shot(uint64_t seed, uint64_t shot_index,
                              std::vector<uint64_t>& det_out, std::vector<uint64_t>& obs_out) {
    ShotRng rng(seed, shot_index);
    std::fill(frame_x_.begin(), frame_x_.end(), 0);
    std::fill(frame_z_.begin(), frame_z_.end(), 0);

    uint32_t mcount = 0;
    uint32_t dcount = 0;
    det_out.assign((detector_count_ + 63) / 64, 0);
    obs_out.assign((observable_count_ + 63) / 64, 0);

    for (const auto& ins : c_.instructions) {
        switch (ins.kind) {
            case OpKind::ResetPlus:
            case OpKind::ResetZero:
                for (uint32_t q : ins.targets) {
                    clear_bit(frame_x_, q);
                    clear_bit(frame_z_, q);
                }
                break;
            case OpKind::CX: {
                uint32_t a = ins.targets[0], b = ins.targets[1];
                if (get_bit(frame_x_, a)) flip_bit(frame_x_, b);
                if (get_bit(frame_z_, b)) flip_bit(frame_z_, a);
                break;
            }
            case OpKind::CZ: {
                uint32_t a = ins.targets[0], b = ins.targets[1];
                if (get_bit(frame_x_, a)) flip_bit(frame_z_, b);
                if (get_bit(frame_x_, b)) flip_bit(frame_z_, a);
                break;
            }
            case OpKind::MX:
                for (uint32_t q : ins.targets) record_[mcount++] = get_bit(frame_z_, q);
                break;
            case OpKind::MZ:
                for (uint32_t q : ins.targets) record_[mcount++] = get_bit(frame_x_, q);
                break;
            case OpKind::MPPZ: {
                uint8_t b = 0;
                for (uint32_t q : ins.targets) b ^= get_bit(frame_x_, q);
                record_[mcount++] = b;
                break;
            }
            case OpKind::Tick: break;
            case OpKind::BiasedPauli1: {
                double px2 = ins.args[0], py2 = ins.args[1], pz = ins.args[2];
                double c1 = px2, c2 = px2 + py2, c3 = c2 + pz;
                for (uint32_t q : ins.targets) {
                    double u = rng.next_unit();
                    if (u >= c3) continue;
                    if (u < c1) flip_bit(frame_x_, q);
                    else if (u < c2) { flip_bit(frame_x_, q); flip_bit(frame_z_, q); }
                    else flip_bit(frame_z_, q);
                }
                break;
            }
            case OpKind::Pauli2: {
                double u = rng.next_unit();
                double acc = 0;
                for (const auto& t : ins.terms) {
                    acc += t.p;
                    if (u < acc) {
                        uint32_t a = ins.targets[0], b = ins.targets[1];
                        if (t.first == 'X' || t.first == 'Y') flip_bit(frame_x_, a);
                        if (t.first == 'Z' || t.first == 'Y') flip_bit(frame_z_, a);
                        if (t.second == 'X' || t.second == 'Y') flip_bit(frame_x_, b);
                        if (t.second == 'Z' || t.second == 'Y') flip_bit(frame_z_, b);
                        break;
                    }
                }
                break;
            }
            case OpKind::Depolarize2: {
                double u = rng.next_unit();
                if (u < ins.args[0]) {
                    uint32_t k = uint32_t(u / ins.args[0] * 15.0);
                    if (k > 14) k = 14;
                    k += 1;  // 1..15, skip II
                    uint32_t pa = k & 3, pb = (k >> 2) & 3;
                    uint32_t a = ins.targets[0], b = ins.targets[1];
                    if (pa == 1 || pa == 3) flip_bit(frame_x_, a);
                    if (pa == 2 || pa == 3) flip_bit(frame_z_, a);
                    if (pb == 1 || pb == 3) flip_bit(frame_x_, b);
                    if (pb == 2 || pb == 3) flip_bit(frame_z_, b);
                }
                break;
            }
            case OpKind::FlipLastResult:
                if (rng.next_unit() < ins.args[0]) record_[mcount - 1] ^= 1;
                break;
            case OpKind::Detector: {
                uint8_t b = 0;
                for (int32_t r : ins.rec) b ^= record_[mcount + r];
                if (b) det_out[dcount >> 6] ^= uint64_t(1) << (dcount & 63);
                dcount++;
                break;
            }
            case OpKind::Observable: {
                uint8_t b = 0;
                for (int32_t r : ins.rec) b ^= record_[mcount + r];
                if (b) obs_out[ins.index >> 6] ^= uint64_t(1) << (ins.index & 63);
                break;
            }
        }
    }
    for (const auto& fo : extra_) {
        uint8_t b = 0;
        for (uint32_t r : fo.records) b ^= record_[r];
        for (uint32_t q : fo.end_x_parity) b ^= get_bit(frame_x_, q);
        if (b) obs_out[fo.index >> 6] ^= uint64_t(1) << (fo.index & 63);
    }
}

ShotBatch sample(const Circuit& c, uint64_t shots, uint64_t seed,
                 const std::vector<FrameObservable>& extra,
                 uint64_t first_shot_index, int threads) {
    ShotBatch batch;
    batch.seed = seed;
    batch.shot_count = shots;
    FrameSimulator probe(c, extra);
    batch.detector_count = probe.detector_count();
    batch.observable_count = probe.observable_count();
    size_t dw = batch.det_words_per_shot(), ow = batch.obs_words_per_shot();
    batch.detector_bits.assign(shots * dw, 0);
    batch.observable_bits.assign(shots * ow, 0);

    auto worker = [&](uint64_t lo, uint64_t hi) {
        FrameSimulator sim(c, extra);
        std::vector<uint64_t> det, obs;
        for (uint64_t s = lo; s < hi; s++) {
            sim.run_shot(seed, first_shot_index + s, det, obs);
            std::memcpy(batch.detector_bits.data() + s * dw, det.data(), dw * 8);
            std::memcpy(batch.observable_bits.data() + s * ow, obs.data(), ow * 8);
        }
    };
    if (threads <= 1 || shots < 1024) {
        worker(0, shots);
    } else {
        std::vector<std::thread> pool;
        uint64_t chunk = (shots + threads - 1) / threads;
        for (int t = 0; t < threads; t++) {
            uint64_t lo = t * chunk, hi = std::min<uint64_t>(shots, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return batch;
}

}  // namespace biasq
