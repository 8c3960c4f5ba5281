#include "biasq/dem.hpp"

#include <map>
#include <stdexcept>

#include "json.hpp"

namespace biasq {

namespace {

struct MaskSpace {
    uint32_t det_count;
    uint32_t obs_count;
    size_t words;
    size_t size() const { return words; }
};

void mask_flip(std::vector<uint64_t>& m, uint32_t bit) { m[bit >> 6] ^= uint64_t(1) << (bit & 63); }

void mask_xor(std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    for (size_t i = 0; i < a.size(); i++) a[i] ^= b[i];
}

bool mask_any(const std::vector<uint64_t>& m) {
    for (auto w : m) if (w) return true;
    return false;
}

}  // namespace

std::vector<RawFault> collect_raw_faults(const Circuit& c,
                                         const std::vector<FrameObservable>& extra) {
    uint32_t det_count = c.detector_count();
    uint32_t obs_count = c.observable_count();
    for (const auto& fo : extra) obs_count = std::max(obs_count, fo.index + 1);
    size_t words = (det_count + obs_count + 63) / 64;
    uint32_t total_meas = c.measurement_count();

    // Record -> flipped detectors/observables incidence.
    std::vector<std::vector<uint64_t>> rec_mask(total_meas, std::vector<uint64_t>(words, 0));
    {
        uint32_t mcount = 0, dcount = 0;
        for (const auto& ins : c.instructions) {
            if (ins.kind == OpKind::MX || ins.kind == OpKind::MZ) mcount += ins.targets.size();
            else if (ins.kind == OpKind::MPPZ) mcount += 1;
            else if (ins.kind == OpKind::Detector) {
                for (int32_t r : ins.rec) mask_flip(rec_mask[mcount + r], dcount);
                dcount++;
            } else if (ins.kind == OpKind::Observable) {
                for (int32_t r : ins.rec) mask_flip(rec_mask[mcount + r], det_count + ins.index);
            }
        }
        for (const auto& fo : extra)
            for (uint32_t r : fo.records) mask_flip(rec_mask[r], det_count + fo.index);
    }

    // Backward sensitivity masks: inserting X/Z on qubit q at the current
    // position flips exactly the bits in fx[q] / fz[q].
    std::vector<std::vector<uint64_t>> fx(c.qubit_count, std::vector<uint64_t>(words, 0));
    std::vector<std::vector<uint64_t>> fz(c.qubit_count, std::vector<uint64_t>(words, 0));
    for (const auto& fo : extra)
        for (uint32_t q : fo.end_x_parity) mask_flip(fx[q], det_count + fo.index);

    std::vector<RawFault> raws;
    auto emit = [&](std::vector<uint64_t> mask, double p) {
        if (p <= 0) return;
        if (!mask_any(mask)) return;
        raws.push_back({std::move(mask), p});
    };

    // Measurement index just before each instruction, for reverse traversal.
    std::vector<uint32_t> meas_before(c.instructions.size() + 1, 0);
    {
        uint32_t mcount = 0;
        for (size_t i = 0; i < c.instructions.size(); i++) {
            meas_before[i] = mcount;
            const auto& ins = c.instructions[i];
            if (ins.kind == OpKind::MX || ins.kind == OpKind::MZ) mcount += ins.targets.size();
            else if (ins.kind == OpKind::MPPZ) mcount += 1;
        }
        meas_before[c.instructions.size()] = mcount;
    }

    for (size_t ii = c.instructions.size(); ii-- > 0;) {
        const auto& ins = c.instructions[ii];
        switch (ins.kind) {
            case OpKind::ResetPlus:
            case OpKind::ResetZero:
                for (uint32_t q : ins.targets) {
                    std::fill(fx[q].begin(), fx[q].end(), 0);
                    std::fill(fz[q].begin(), fz[q].end(), 0);
                }
                break;
            case OpKind::CX: {
                uint32_t a = ins.targets[0], b = ins.targets[1];
                mask_xor(fx[a], fx[b]);
                mask_xor(fz[b], fz[a]);
                break;
            }
            case OpKind::CZ: {
                uint32_t a = ins.targets[0], b = ins.targets[1];
                mask_xor(fx[a], fz[b]);
                mask_xor(fx[b], fz[a]);
                break;
            }
            case OpKind::MX: {
                uint32_t r = meas_before[ii] + uint32_t(ins.targets.size()) - 1;
                for (size_t k = ins.targets.size(); k-- > 0;) {
                    mask_xor(fz[ins.targets[k]], rec_mask[r]);
                    r--;
                }
                break;
            }
            case OpKind::MZ: {
                uint32_t r = meas_before[ii] + uint32_t(ins.targets.size()) - 1;
                for (size_t k = ins.targets.size(); k-- > 0;) {
                    mask_xor(fx[ins.targets[k]], rec_mask[r]);
                    r--;
                }
                break;
            }
            case OpKind::MPPZ: {
                uint32_t r = meas_before[ii];
                for (uint32_t q : ins.targets) mask_xor(fx[q], rec_mask[r]);
                break;
            }
            case OpKind::BiasedPauli1: {
                double px2 = ins.args[0], py2 = ins.args[1], pz = ins.args[2];
                for (uint32_t q : ins.targets) {
                    emit(fx[q], px2);
                    emit(fz[q], pz);
                    std::vector<uint64_t> y = fx[q];
                    mask_xor(y, fz[q]);
                    emit(std::move(y), py2);
                }
                break;
            }
            case OpKind::Pauli2: {
                uint32_t a = ins.targets[0], b = ins.targets[1];
                for (const auto& t : ins.terms) {
                    std::vector<uint64_t> m(words, 0);
                    if (t.first == 'X' || t.first == 'Y') mask_xor(m, fx[a]);
                    if (t.first == 'Z' || t.first == 'Y') mask_xor(m, fz[a]);
                    if (t.second == 'X' || t.second == 'Y') mask_xor(m, fx[b]);
                    if (t.second == 'Z' || t.second == 'Y') mask_xor(m, fz[b]);
                    emit(std::move(m), t.p);
                }
                break;
            }
            case OpKind::Depolarize2: {
                uint32_t a = ins.targets[0], b = ins.targets[1];
                double p15 = ins.args[0] / 15.0;
                for (uint32_t k = 1; k < 16; k++) {
                    uint32_t pa = k & 3, pb = (k >> 2) & 3;
                    std::vector<uint64_t> m(words, 0);
                    if (pa == 1 || pa == 3) mask_xor(m, fx[a]);
                    if (pa == 2 || pa == 3) mask_xor(m, fz[a]);
                    if (pb == 1 || pb == 3) mask_xor(m, fx[b]);
                    if (pb == 2 || pb == 3) mask_xor(m, fz[b]);
                    emit(std::move(m), p15);
                }
                break;
            }
            case OpKind::FlipLastResult: {
                uint32_t r = meas_before[ii] - 1;
                emit(rec_mask[r], ins.args[0]);
                break;
            }
            default: break;
        }
    }
    return raws;
}

DetectorErrorModel merge_raw_faults(const Circuit& c, std::vector<RawFault> raws,
                                    const std::vector<FrameObservable>& extra) {
    uint32_t det_count = c.detector_count();
    uint32_t obs_count = c.observable_count();
    for (const auto& fo : extra) obs_count = std::max(obs_count, fo.index + 1);

    std::map<std::vector<uint64_t>, double> merged;
    for (auto& rf : raws) {
        double& p = merged[rf.mask];
        p = p * (1 - rf.p) + rf.p * (1 - p);
    }

    DetectorErrorModel dem;
    dem.detector_count = det_count;
    dem.observable_count = obs_count;
    for (auto& [mask, p] : merged) {
        if (p <= 0) continue;
        FaultMechanism m;
        m.probability = p;
        for (uint32_t bit = 0; bit < det_count + obs_count; bit++) {
            if ((mask[bit >> 6] >> (bit & 63)) & 1) {
                if (bit < det_count) m.detectors.push_back(bit);
                else m.observables.push_back(bit - det_count);
            }
        }
        dem.mechanisms.push_back(std::move(m));
    }
    return dem;
}

DetectorErrorModel extract_dem(const Circuit& c, const std::vector<FrameObservable>& extra,
                               bool run_validation) {
    if (run_validation) {
        auto diags = validate(c);
        if (!diags.empty())
            throw std::runtime_error("extract_dem: " + diags.front().message);
    }
    return merge_raw_faults(c, collect_raw_faults(c, extra), extra);
}

double bitflip_floor(const DetectorErrorModel& dem, uint32_t observable) {
    double prod = 1.0;
    for (const auto& m : dem.mechanisms) {
        for (uint32_t o : m.observables) {
            if (o == observable) {
                prod *= 1.0 - 2.0 * m.probability;
                break;
            }
        }
    }
    return 0.5 * (1.0 - prod);
}

std::string DetectorErrorModel::to_json() const {
    nlohmann::json j;
    j["detectors"] = detector_count;
    j["observables"] = observable_count;
    auto& ms = j["mechanisms"] = nlohmann::json::array();
    for (const auto& m : mechanisms) {
        nlohmann::json jm;
        jm["p"] = m.probability;
        jm["dets"] = m.detectors;
        jm["obs"] = m.observables;
        ms.push_back(std::move(jm));
    }
    return j.dump(2);
}

DetectorErrorModel DetectorErrorModel::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    DetectorErrorModel dem;
    dem.detector_count = j.at("detectors").get<uint32_t>();
    dem.observable_count = j.at("observables").get<uint32_t>();
    for (const auto& jm : j.at("mechanisms")) {
        FaultMechanism m;
        m.probability = jm.at("p").get<double>();
        m.detectors = jm.at("dets").get<std::vector<uint32_t>>();
        m.observables = jm.at("obs").get<std::vector<uint32_t>>();
        dem.mechanisms.push_back(std::move(m));
    }
    return dem;
}

}  // namespace biasq
