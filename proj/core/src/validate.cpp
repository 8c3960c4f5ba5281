#include <algorithm>

#include "biasq/circuit.hpp"
#include "biasq/tableau.hpp"

namespace biasq {

std::vector<Diagnostic> validate(const Circuit& c) {
    std::vector<Diagnostic> out;
    auto bad = [&](size_t idx, std::string msg) { out.push_back({std::move(msg), idx}); };

    uint32_t measured = 0;
    bool any_measurement = false;
    for (size_t i = 0; i < c.instructions.size(); i++) {
        const auto& ins = c.instructions[i];
        for (uint32_t q : ins.targets) {
            if (q >= c.qubit_count) {
                bad(i, "qubit index " + std::to_string(q) + " out of range");
                return out;
            }
        }
        switch (ins.kind) {
            case OpKind::CX:
            case OpKind::CZ:
            case OpKind::Pauli2:
            case OpKind::Depolarize2:
                if (ins.targets.size() != 2 || ins.targets[0] == ins.targets[1])
                    bad(i, "two-qubit op needs two distinct targets");
                break;
            case OpKind::MPPZ: {
                auto t = ins.targets;
                std::sort(t.begin(), t.end());
                if (std::adjacent_find(t.begin(), t.end()) != t.end())
                    bad(i, "MPPZ support has repeated qubits");
                break;
            }
            default: break;
        }
        if (ins.kind == OpKind::BiasedPauli1) {
            double s = ins.args[0] + ins.args[1] + ins.args[2];
            if (s > 1.0) bad(i, "BIASED_PAULI1 probabilities sum beyond 1");
        }
        if (ins.kind == OpKind::Pauli2) {
            double s = 0;
            for (auto& t : ins.terms) s += t.p;
            if (s > 1.0) bad(i, "PAULI2 probabilities sum beyond 1");
        }
        if (ins.kind == OpKind::FlipLastResult && !any_measurement)
            bad(i, "FLIP_RESULT with no preceding measurement");
        if (ins.kind == OpKind::MX || ins.kind == OpKind::MZ) {
            measured += ins.targets.size();
            any_measurement = true;
        }
        if (ins.kind == OpKind::MPPZ) {
            measured += 1;
            any_measurement = true;
        }
        if (ins.kind == OpKind::Detector || ins.kind == OpKind::Observable) {
            for (int32_t r : ins.rec) {
                if (r >= 0 || uint32_t(-r) > measured)
                    bad(i, "record offset out of range");
            }
        }
    }
    if (!out.empty()) return out;

    // Noise-free symbolic run: every detector and observable must be the
    // constant 0 expression. Resets may also burn one symbol per target.
    size_t total_meas = c.measurement_count();
    size_t total_resets = 0;
    for (const auto& ins : c.instructions)
        if (ins.kind == OpKind::ResetPlus || ins.kind == OpKind::ResetZero)
            total_resets += ins.targets.size();
    SymbolicTableau tab(c.qubit_count, total_meas + total_resets + 1);
    std::vector<SignExpr> records;
    records.reserve(total_meas);
    size_t det_idx = 0;
    for (size_t i = 0; i < c.instructions.size(); i++) {
        const auto& ins = c.instructions[i];
        switch (ins.kind) {
            case OpKind::ResetPlus:
                for (uint32_t q : ins.targets) tab.reset_plus(q);
                break;
            case OpKind::ResetZero:
                for (uint32_t q : ins.targets) tab.reset_zero(q);
                break;
            case OpKind::CX: tab.apply_cx(ins.targets[0], ins.targets[1]); break;
            case OpKind::CZ: tab.apply_cz(ins.targets[0], ins.targets[1]); break;
            case OpKind::MX:
                for (uint32_t q : ins.targets) records.push_back(tab.measure_x(q));
                break;
            case OpKind::MZ:
                for (uint32_t q : ins.targets) records.push_back(tab.measure_z(q));
                break;
            case OpKind::MPPZ: {
                BitVec ox(c.qubit_count), oz(c.qubit_count);
                for (uint32_t q : ins.targets) oz.set(q, true);
                records.push_back(tab.measure(ox, oz));
                break;
            }
            case OpKind::Detector:
            case OpKind::Observable: {
                SignExpr e(total_meas + total_resets + 1);
                for (int32_t r : ins.rec) e.xor_with(records[records.size() + r]);
                const char* what = ins.kind == OpKind::Detector ? "detector" : "observable";
                std::string id = ins.kind == OpKind::Detector
                                     ? std::to_string(det_idx)
                                     : std::to_string(ins.index);
                if (!e.deterministic())
                    bad(i, std::string("nondeterministic ") + what + " " + id);
                else if (e.constant)
                    bad(i, std::string("deterministically flipped ") + what + " " + id);
                if (ins.kind == OpKind::Detector) det_idx++;
                break;
            }
            default: break;
        }
    }
    return out;
}

}  // namespace biasq
