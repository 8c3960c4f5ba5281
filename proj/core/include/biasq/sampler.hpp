#pragma once

#include <cstdint>
#include <vector>

#include "biasq/circuit.hpp"

namespace biasq {

/// Deterministic per-shot random stream: the state is derived from
/// (seed, shot) alone, so results cannot depend on batching or thread count.
struct ShotRng {
    uint64_t state;

    static uint64_t mix(uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    ShotRng(uint64_t seed, uint64_t shot) : state(mix(mix(seed) ^ (shot * 0xd1342543de82ef95ull + 1))) {}

    uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }
};

/// Optional end-of-circuit observable that is not expressible as a record
/// parity: XOR of the listed records with the end-frame X parity over the
/// listed qubits. Used for the unprotected bit-flip direction of phase-flip
/// codes, where the orthogonal logical is never physically measured.
struct FrameObservable {
    uint32_t index = 1;
    std::vector<uint32_t> records;       // absolute measurement indices
    std::vector<uint32_t> end_x_parity;  // qubits whose final X-frame parity enters
};

struct ShotBatch {
    uint64_t shot_count = 0;
    uint32_t detector_count = 0;
    uint32_t observable_count = 0;
    uint64_t seed = 0;
    // Row-major [shot][bit], bit-packed per shot.
    std::vector<uint64_t> detector_bits;
    std::vector<uint64_t> observable_bits;

    size_t det_words_per_shot() const { return (detector_count + 63) / 64; }
    size_t obs_words_per_shot() const { return (observable_count + 63) / 64; }
    bool detector(uint64_t shot, uint32_t d) const {
        return (detector_bits[shot * det_words_per_shot() + (d >> 6)] >> (d & 63)) & 1;
    }
    bool observable(uint64_t shot, uint32_t o) const {
        return (observable_bits[shot * obs_words_per_shot() + (o >> 6)] >> (o & 63)) & 1;
    }
};

/// Pauli-frame Monte-Carlo sampling of detector/observable bits.
/// `extra` appends frame observables past the circuit's record observables.
ShotBatch sample(const Circuit& c, uint64_t shots, uint64_t seed,
                 const std::vector<FrameObservable>& extra = {},
                 uint64_t first_shot_index = 0, int threads = 1);

/// Single-shot sampler core used by both sample() and the streaming decoder
/// loop; appends detector bits / observable bits of one shot.
class FrameSimulator {
  public:
    FrameSimulator(const Circuit& c, const std::vector<FrameObservable>& extra);

    /// Runs shot `shot_index` under `seed`; output vectors are overwritten.
    void run_shot(uint64_t seed, uint64_t shot_index,
                  std::vector<uint64_t>& det_out, std::vector<uint64_t>& obs_out);

    uint32_t detector_count() const { return detector_count_; }
    uint32_t observable_count() const { return observable_count_; }

  private:
    const Circuit& c_;
    const std::vector<FrameObservable>& extra_;
    uint32_t detector_count_;
    uint32_t observable_count_;
    size_t words_;
    std::vector<uint64_t> frame_x_, frame_z_;
    std::vector<uint8_t> record_;
};

}  // namespace biasq
