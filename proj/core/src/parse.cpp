#include <cctype>
#include <charconv>
#include <cstdlib>
#include <stdexcept>

#include "biasq/circuit.hpp"

namespace biasq {

namespace {

struct Cursor {
    const std::string& text;
    size_t pos = 0;
    size_t line = 1;
};

[[noreturn]] void fail(size_t line, const std::string& msg) {
    throw std::runtime_error("line " + std::to_string(line) + ": " + msg);
}

void skip_spaces(const std::string& s, size_t& i) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) i++;
}

std::string next_token(const std::string& s, size_t& i) {
    skip_spaces(s, i);
    size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') i++;
    return s.substr(start, i - start);
}

double parse_prob(const std::string& tok, size_t line) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || tok.empty())
        fail(line, "malformed probability '" + tok + "'");
    if (v < 0.0 || v > 1.0) fail(line, "probability out of [0,1]: " + tok);
    return v;
}

uint32_t parse_qubit(const std::string& tok, size_t line) {
    if (tok.empty()) fail(line, "missing qubit index");
    uint64_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        fail(line, "malformed qubit index '" + tok + "'");
    return uint32_t(v);
}

int32_t parse_rec(const std::string& tok, size_t line, uint32_t measured_so_far) {
    // rec[-k]
    if (tok.size() < 7 || tok.substr(0, 5) != "rec[-" || tok.back() != ']')
        fail(line, "malformed record reference '" + tok + "'");
    std::string num = tok.substr(5, tok.size() - 6);
    uint64_t k = 0;
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), k);
    if (ec != std::errc() || p != num.data() + num.size() || k == 0)
        fail(line, "malformed record reference '" + tok + "'");
    if (k > measured_so_far)
        fail(line, "record rec[-" + std::to_string(k) + "] reaches before the first measurement");
    return -int32_t(k);
}

// Splits "NAME(arg1,arg2,...)" into name and raw args.
bool split_paren(const std::string& head, std::string& name, std::vector<std::string>& args,
                 size_t line) {
    auto open = head.find('(');
    if (open == std::string::npos) {
        name = head;
        return false;
    }
    if (head.back() != ')') fail(line, "unbalanced parentheses in '" + head + "'");
    name = head.substr(0, open);
    std::string inner = head.substr(open + 1, head.size() - open - 2);
    size_t start = 0;
    while (start <= inner.size()) {
        auto comma = inner.find(',', start);
        if (comma == std::string::npos) {
            args.push_back(inner.substr(start));
            break;
        }
        args.push_back(inner.substr(start, comma - start));
        start = comma + 1;
    }
    return true;
}

}  // namespace

Circuit parse_circuit(const std::string& text) {
    Circuit c;
    bool saw_qubits = false;
    uint32_t measured = 0;
    size_t line_no = 0;
    size_t pos = 0;

    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        line_no++;
        if (pos > text.size() + 1) break;

        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        size_t i = 0;
        std::string head = next_token(line, i);
        if (head.empty()) {
            if (pos > text.size()) break;
            continue;
        }

        std::string name;
        std::vector<std::string> par_args;
        split_paren(head, name, par_args, line_no);

        auto rest_qubits = [&](size_t min_count) {
            std::vector<uint32_t> qs;
            for (;;) {
                std::string tok = next_token(line, i);
                if (tok.empty()) break;
                qs.push_back(parse_qubit(tok, line_no));
            }
            if (qs.size() < min_count)
                fail(line_no, name + " expects at least " + std::to_string(min_count) + " targets");
            return qs;
        };

        if (name == "QUBITS") {
            if (saw_qubits) fail(line_no, "duplicate QUBITS line");
            std::string tok = next_token(line, i);
            c.qubit_count = parse_qubit(tok, line_no);
            saw_qubits = true;
            continue;
        }
        if (!saw_qubits) fail(line_no, "first instruction must be QUBITS n");

        if (name == "RX") {
            c.append({OpKind::ResetPlus, rest_qubits(1)});
        } else if (name == "R") {
            c.append({OpKind::ResetZero, rest_qubits(1)});
        } else if (name == "CX" || name == "CZ") {
            auto qs = rest_qubits(2);
            if (qs.size() != 2) fail(line_no, name + " expects exactly 2 targets");
            c.append({name == "CX" ? OpKind::CX : OpKind::CZ, qs});
        } else if (name == "MX" || name == "MZ") {
            auto qs = rest_qubits(1);
            measured += qs.size();
            c.append({name == "MX" ? OpKind::MX : OpKind::MZ, qs});
        } else if (name == "MPPZ") {
            auto qs = rest_qubits(1);
            measured += 1;
            c.append({OpKind::MPPZ, qs});
        } else if (name == "TICK") {
            c.append({OpKind::Tick, {}});
        } else if (name == "BIASED_PAULI1") {
            if (par_args.size() != 3) fail(line_no, "BIASED_PAULI1 expects (px2,py2,pz)");
            Instruction ins{OpKind::BiasedPauli1, rest_qubits(1)};
            for (auto& a : par_args) ins.args.push_back(parse_prob(a, line_no));
            if (ins.args[0] + ins.args[1] + ins.args[2] > 1.0)
                fail(line_no, "BIASED_PAULI1 component probabilities sum beyond 1");
            c.append(std::move(ins));
        } else if (name == "PAULI2") {
            if (par_args.empty()) fail(line_no, "PAULI2 expects label:p terms");
            Instruction ins{OpKind::Pauli2, rest_qubits(2)};
            if (ins.targets.size() != 2) fail(line_no, "PAULI2 expects exactly 2 targets");
            double total = 0;
            for (auto& a : par_args) {
                auto colon = a.find(':');
                if (colon == std::string::npos) fail(line_no, "PAULI2 term missing ':' in '" + a + "'");
                std::string label = a.substr(0, colon);
                if (label.size() != 2) fail(line_no, "PAULI2 label must have 2 letters: '" + label + "'");
                for (char ch : label)
                    if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z')
                        fail(line_no, "bad pauli letter in '" + label + "'");
                if (label == "II") fail(line_no, "PAULI2 term II is not a fault");
                double p = parse_prob(a.substr(colon + 1), line_no);
                total += p;
                ins.terms.push_back({label[0], label[1], p});
            }
            if (total > 1.0) fail(line_no, "PAULI2 term probabilities sum beyond 1");
            c.append(std::move(ins));
        } else if (name == "DEPOLARIZE2") {
            if (par_args.size() != 1) fail(line_no, "DEPOLARIZE2 expects (p)");
            Instruction ins{OpKind::Depolarize2, rest_qubits(2)};
            if (ins.targets.size() != 2) fail(line_no, "DEPOLARIZE2 expects exactly 2 targets");
            ins.args.push_back(parse_prob(par_args[0], line_no));
            c.append(std::move(ins));
        } else if (name == "FLIP_RESULT") {
            if (par_args.size() != 1) fail(line_no, "FLIP_RESULT expects (p)");
            if (measured == 0) fail(line_no, "FLIP_RESULT with no preceding measurement");
            Instruction ins{OpKind::FlipLastResult, {}};
            ins.args.push_back(parse_prob(par_args[0], line_no));
            c.append(std::move(ins));
        } else if (name == "DETECTOR") {
            Instruction ins{OpKind::Detector, {}};
            for (;;) {
                std::string tok = next_token(line, i);
                if (tok.empty()) break;
                ins.rec.push_back(parse_rec(tok, line_no, measured));
            }
            if (ins.rec.empty()) fail(line_no, "DETECTOR expects at least one record");
            c.append(std::move(ins));
        } else if (name == "OBSERVABLE") {
            Instruction ins{OpKind::Observable, {}};
            std::string idx_tok = next_token(line, i);
            ins.index = parse_qubit(idx_tok, line_no);
            for (;;) {
                std::string tok = next_token(line, i);
                if (tok.empty()) break;
                ins.rec.push_back(parse_rec(tok, line_no, measured));
            }
            if (ins.rec.empty()) fail(line_no, "OBSERVABLE expects at least one record");
            c.append(std::move(ins));
        } else {
            fail(line_no, "unknown instruction '" + name + "'");
        }

        if (pos > text.size()) break;
    }
    if (!saw_qubits) fail(1, "missing QUBITS header");

    // Rebuild the internal record cursor for programmatic appends.
    Circuit rebuilt;
    rebuilt.qubit_count = c.qubit_count;
    for (auto& ins : c.instructions) {
        switch (ins.kind) {
            case OpKind::MX: for (uint32_t q : ins.targets) rebuilt.mx(q); break;
            case OpKind::MZ: for (uint32_t q : ins.targets) rebuilt.mz(q); break;
            case OpKind::MPPZ: rebuilt.mppz(ins.targets); break;
            default: rebuilt.append(ins); break;
        }
    }
    return rebuilt;
}

}  // namespace biasq
