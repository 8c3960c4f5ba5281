#include "biasq/circuit.hpp"

#include <cstdio>
#include <stdexcept>

namespace biasq {

bool Instruction::operator==(const Instruction& o) const {
    if (kind != o.kind || targets != o.targets || rec != o.rec || index != o.index)
        return false;
    if (args.size() != o.args.size() || terms.size() != o.terms.size()) return false;
    for (size_t i = 0; i < args.size(); i++)
        if (args[i] != o.args[i]) return false;
    for (size_t i = 0; i < terms.size(); i++)
        if (terms[i].first != o.terms[i].first || terms[i].second != o.terms[i].second ||
            terms[i].p != o.terms[i].p)
            return false;
    return true;
}

uint32_t Circuit::measurement_count() const {
    uint32_t n = 0;
    for (const auto& ins : instructions) {
        if (ins.kind == OpKind::MX || ins.kind == OpKind::MZ) n += ins.targets.size();
        else if (ins.kind == OpKind::MPPZ) n += 1;
    }
    return n;
}

uint32_t Circuit::detector_count() const {
    uint32_t n = 0;
    for (const auto& ins : instructions)
        if (ins.kind == OpKind::Detector) n++;
    return n;
}

uint32_t Circuit::observable_count() const {
    uint32_t n = 0;
    for (const auto& ins : instructions)
        if (ins.kind == OpKind::Observable) n = std::max(n, ins.index + 1);
    return n;
}

uint32_t Circuit::mx(uint32_t q) {
    append({OpKind::MX, {q}});
    return num_measurements_++;
}

uint32_t Circuit::mz(uint32_t q) {
    append({OpKind::MZ, {q}});
    return num_measurements_++;
}

uint32_t Circuit::mppz(const std::vector<uint32_t>& qs) {
    append({OpKind::MPPZ, qs});
    return num_measurements_++;
}

void Circuit::flip_result(double p) {
    Instruction ins{OpKind::FlipLastResult, {}};
    ins.args = {p};
    append(std::move(ins));
}

void Circuit::biased_pauli1(const std::vector<uint32_t>& qs, double px2, double py2, double pz) {
    if (qs.empty()) return;
    Instruction ins{OpKind::BiasedPauli1, qs};
    ins.args = {px2, py2, pz};
    append(std::move(ins));
}

void Circuit::pauli2(uint32_t a, uint32_t b, std::vector<Pauli2Term> terms) {
    Instruction ins{OpKind::Pauli2, {a, b}};
    ins.terms = std::move(terms);
    append(std::move(ins));
}

void Circuit::depolarize2(uint32_t a, uint32_t b, double p) {
    Instruction ins{OpKind::Depolarize2, {a, b}};
    ins.args = {p};
    append(std::move(ins));
}

void Circuit::detector_abs(const std::vector<uint32_t>& records) {
    Instruction ins{OpKind::Detector, {}};
    for (uint32_t r : records) {
        if (r >= num_measurements_) throw std::logic_error("detector record in the future");
        ins.rec.push_back(int32_t(r) - int32_t(num_measurements_));
    }
    append(std::move(ins));
}

void Circuit::observable_abs(uint32_t idx, const std::vector<uint32_t>& records) {
    Instruction ins{OpKind::Observable, {}};
    ins.index = idx;
    for (uint32_t r : records) {
        if (r >= num_measurements_) throw std::logic_error("observable record in the future");
        ins.rec.push_back(int32_t(r) - int32_t(num_measurements_));
    }
    append(std::move(ins));
}

static std::string fmt_prob(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string serialize_circuit(const Circuit& c) {
    std::string out = "QUBITS " + std::to_string(c.qubit_count) + "\n";
    for (const auto& ins : c.instructions) {
        switch (ins.kind) {
            case OpKind::ResetPlus: out += "RX"; break;
            case OpKind::ResetZero: out += "R"; break;
            case OpKind::CX: out += "CX"; break;
            case OpKind::CZ: out += "CZ"; break;
            case OpKind::MX: out += "MX"; break;
            case OpKind::MZ: out += "MZ"; break;
            case OpKind::MPPZ: out += "MPPZ"; break;
            case OpKind::Tick: out += "TICK"; break;
            case OpKind::BiasedPauli1:
                out += "BIASED_PAULI1(" + fmt_prob(ins.args[0]) + "," + fmt_prob(ins.args[1]) +
                       "," + fmt_prob(ins.args[2]) + ")";
                break;
            case OpKind::Pauli2: {
                out += "PAULI2(";
                for (size_t i = 0; i < ins.terms.size(); i++) {
                    if (i) out += ",";
                    out += ins.terms[i].first;
                    out += ins.terms[i].second;
                    out += ":" + fmt_prob(ins.terms[i].p);
                }
                out += ")";
                break;
            }
            case OpKind::Depolarize2:
                out += "DEPOLARIZE2(" + fmt_prob(ins.args[0]) + ")";
                break;
            case OpKind::FlipLastResult:
                out += "FLIP_RESULT(" + fmt_prob(ins.args[0]) + ")";
                break;
            case OpKind::Detector: out += "DETECTOR"; break;
            case OpKind::Observable:
                out += "OBSERVABLE " + std::to_string(ins.index);
                break;
        }
        for (uint32_t q : ins.targets) out += " " + std::to_string(q);
        for (int32_t r : ins.rec) out += " rec[" + std::to_string(r) + "]";
        out += "\n";
    }
    return out;
}

std::string Circuit::str() const { return serialize_circuit(*this); }

}  // namespace biasq
