#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace biasq {

/// Dense bit vector over an arbitrary number of qubits, packed into 64-bit words.
struct BitVec {
    size_t bit_count = 0;
    std::vector<uint64_t> words;

    BitVec() = default;
    explicit BitVec(size_t n) : bit_count(n), words((n + 63) / 64, 0) {}

    bool get(size_t i) const { return (words[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i, bool v) {
        uint64_t mask = uint64_t(1) << (i & 63);
        if (v) words[i >> 6] |= mask;
        else words[i >> 6] &= ~mask;
    }
    void flip(size_t i) { words[i >> 6] ^= uint64_t(1) << (i & 63); }
    void clear() { for (auto& w : words) w = 0; }

    void xor_with(const BitVec& o) {
        for (size_t k = 0; k < words.size(); k++) words[k] ^= o.words[k];
    }
    bool any() const {
        for (auto w : words) if (w) return true;
        return false;
    }
    size_t popcount() const {
        size_t n = 0;
        for (auto w : words) n += __builtin_popcountll(w);
        return n;
    }
    /// Parity of the AND with another vector (symplectic helper).
    bool overlap_parity(const BitVec& o) const {
        uint64_t acc = 0;
        for (size_t k = 0; k < words.size(); k++) acc ^= words[k] & o.words[k];
        return __builtin_popcountll(acc) & 1;
    }
    bool operator==(const BitVec& o) const = default;
};

/// n-qubit Pauli operator in symplectic form. Y is stored as overlapping X and Z
/// bits; the global phase is tracked internally as i^phase_exp so that products
/// of Hermitian Paulis stay Hermitian (phase_exp even at module interfaces).
struct PauliString {
    size_t qubit_count = 0;
    BitVec x;
    BitVec z;
    uint8_t phase_exp = 0;  // power of i, mod 4

    PauliString() = default;
    explicit PauliString(size_t n) : qubit_count(n), x(n), z(n) {}

    /// Parse from text like "+XIZY" or "XZ" (implicit +).
    static PauliString from_str(const std::string& s);

    static PauliString single(size_t n, size_t q, char p);

    bool is_identity() const { return !x.any() && !z.any(); }

    /// +1 or -1; requires the phase to be real.
    int sign() const;

    bool commutes_with(const PauliString& o) const {
        return !(x.overlap_parity(o.z) ^ z.overlap_parity(o.x));
    }

    /// In-place right multiplication: *this <- *this * o, with phase tracking.
    void mul(const PauliString& o);

    std::string str() const;
    bool operator==(const PauliString& o) const = default;
};

/// Product a*b with full sign tracking. Dimension mismatch throws.
PauliString pauli_multiply(const PauliString& a, const PauliString& b);

}  // namespace biasq
