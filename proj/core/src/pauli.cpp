#include "biasq/pauli.hpp"

#include <stdexcept>

namespace biasq {

PauliString PauliString::from_str(const std::string& s) {
    size_t start = 0;
    uint8_t phase = 0;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        if (s[0] == '-') phase = 2;
        start = 1;
    }
    PauliString p(s.size() - start);
    p.phase_exp = phase;
    for (size_t i = start; i < s.size(); i++) {
        size_t q = i - start;
        switch (s[i]) {
            case 'I': case '_': break;
            case 'X': p.x.set(q, true); break;
            case 'Z': p.z.set(q, true); break;
            case 'Y': p.x.set(q, true); p.z.set(q, true); break;
            default: throw std::invalid_argument("bad pauli char");
        }
    }
    return p;
}

PauliString PauliString::single(size_t n, size_t q, char c) {
    PauliString p(n);
    if (c == 'X' || c == 'Y') p.x.set(q, true);
    if (c == 'Z' || c == 'Y') p.z.set(q, true);
    return p;
}

int PauliString::sign() const {
    if (phase_exp == 0) return 1;
    if (phase_exp == 2) return -1;
    throw std::logic_error("imaginary pauli phase at interface");
}

void PauliString::mul(const PauliString& o) {
    if (qubit_count != o.qubit_count)
        throw std::invalid_argument("pauli dimension mismatch");
    // Per-qubit phase rules: X*Y=iZ, Z*X=iY, Y*Z=iX and the three reverses
    // give -i. Accumulate powers of i mod 4 across all qubits bitwise.
    uint32_t imag = 0;
    for (size_t k = 0; k < x.words.size(); k++) {
        uint64_t x1 = x.words[k], z1 = z.words[k];
        uint64_t x2 = o.x.words[k], z2 = o.z.words[k];
        uint64_t tx = x1 & ~z1, tz = z1 & ~x1, ty = x1 & z1;
        uint64_t ox = x2 & ~z2, oz = z2 & ~x2, oy = x2 & z2;
        uint64_t plus_i = (tx & oy) | (tz & ox) | (ty & oz);
        uint64_t minus_i = (tx & oz) | (tz & oy) | (ty & ox);
        imag += __builtin_popcountll(plus_i);
        imag += 3u * __builtin_popcountll(minus_i);
    }
    phase_exp = uint8_t((phase_exp + o.phase_exp + imag) & 3);
    x.xor_with(o.x);
    z.xor_with(o.z);
}

PauliString pauli_multiply(const PauliString& a, const PauliString& b) {
    if (a.qubit_count != b.qubit_count)
        throw std::invalid_argument("pauli dimension mismatch");
    PauliString r = a;
    r.mul(b);
    return r;
}

std::string PauliString::str() const {
    std::string s;
    s += (phase_exp == 0) ? '+' : (phase_exp == 2) ? '-' : (phase_exp == 1) ? 'i' : 'j';
    for (size_t q = 0; q < qubit_count; q++) {
        bool xb = x.get(q), zb = z.get(q);
        s += xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
    }
    return s;
}

}  // namespace biasq
