#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "biasq/pauli.hpp"

namespace biasq {

/// GF(2) affine expression in the measurement-outcome symbols: value =
/// constant XOR (parity of the chosen symbols). Used to reason about which
/// records are deterministic in a noise-free stabilizer circuit.
struct SignExpr {
    bool constant = false;
    BitVec symbols;

    explicit SignExpr(size_t symbol_capacity = 0) : symbols(symbol_capacity) {}
    bool deterministic() const { return !symbols.any(); }
    void xor_with(const SignExpr& o) {
        constant ^= o.constant;
        symbols.xor_with(o.symbols);
    }
    bool operator==(const SignExpr& o) const = default;
};

/// Stabilizer tableau (Aaronson-Gottesman destabilizer/stabilizer form) whose
/// generator signs are symbolic. Nondeterministic measurements introduce fresh
/// symbols; records come back as affine expressions over them, which makes
/// "is this detector deterministic?" a direct syntactic question.
class SymbolicTableau {
  public:
    SymbolicTableau(size_t qubits, size_t symbol_capacity);

    void apply_cx(uint32_t a, uint32_t b);
    void apply_cz(uint32_t a, uint32_t b);

    /// Measures the +1/-1 Pauli with the given X/Z support; returns the record
    /// as a sign expression (fresh symbol if nondeterministic).
    SignExpr measure(const BitVec& ox, const BitVec& oz);

    SignExpr measure_x(uint32_t q);
    SignExpr measure_z(uint32_t q);
    void reset_plus(uint32_t q);
    void reset_zero(uint32_t q);

    size_t symbols_used() const { return next_symbol_; }

  private:
    size_t n_;
    size_t symbol_capacity_;
    size_t next_symbol_ = 0;
    // Rows 0..n-1 destabilizers, n..2n-1 stabilizers.
    std::vector<BitVec> row_x_;
    std::vector<BitVec> row_z_;
    std::vector<SignExpr> sign_;

    bool anticommutes(size_t row, const BitVec& ox, const BitVec& oz) const;
    // row_mul: rows[h] <- rows[h] * rows[i], with mod-4 phase bookkeeping.
    void row_mul(size_t h, size_t i);
    void cond_flip_sign_where_x(uint32_t q, const SignExpr& e);
    void cond_flip_sign_where_z(uint32_t q, const SignExpr& e);
};

}  // namespace biasq
