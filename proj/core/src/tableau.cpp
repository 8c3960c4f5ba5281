#include "biasq/tableau.hpp"

#include <cassert>
#include <stdexcept>

namespace biasq {

SymbolicTableau::SymbolicTableau(size_t qubits, size_t symbol_capacity)
    : n_(qubits), symbol_capacity_(symbol_capacity) {
    row_x_.assign(2 * n_, BitVec(n_));
    row_z_.assign(2 * n_, BitVec(n_));
    sign_.assign(2 * n_, SignExpr(symbol_capacity_));
    // |0...0>: destabilizer i = X_i, stabilizer i = Z_i.
    for (size_t i = 0; i < n_; i++) {
        row_x_[i].set(i, true);
        row_z_[n_ + i].set(i, true);
    }
}

bool SymbolicTableau::anticommutes(size_t row, const BitVec& ox, const BitVec& oz) const {
    return row_x_[row].overlap_parity(oz) ^ row_z_[row].overlap_parity(ox);
}

void SymbolicTableau::row_mul(size_t h, size_t i) {
    // Phase of P_h * P_i accumulated as a power of i; must come out real.
    uint32_t imag = 0;
    for (size_t k = 0; k < row_x_[h].words.size(); k++) {
        uint64_t x1 = row_x_[h].words[k], z1 = row_z_[h].words[k];
        uint64_t x2 = row_x_[i].words[k], z2 = row_z_[i].words[k];
        uint64_t tx = x1 & ~z1, tz = z1 & ~x1, ty = x1 & z1;
        uint64_t ox = x2 & ~z2, oz = z2 & ~x2, oy = x2 & z2;
        imag += __builtin_popcountll((tx & oy) | (tz & ox) | (ty & oz));
        imag += 3u * __builtin_popcountll((tx & oz) | (tz & oy) | (ty & ox));
    }
    assert((imag & 1) == 0);
    if (imag & 2) sign_[h].constant ^= true;
    sign_[h].xor_with(sign_[i]);
    row_x_[h].xor_with(row_x_[i]);
    row_z_[h].xor_with(row_z_[i]);
}

void SymbolicTableau::apply_cx(uint32_t a, uint32_t b) {
    for (size_t r = 0; r < 2 * n_; r++) {
        bool xa = row_x_[r].get(a), za = row_z_[r].get(a);
        bool xb = row_x_[r].get(b), zb = row_z_[r].get(b);
        if (xa && zb && (xb == za)) sign_[r].constant ^= true;
        row_x_[r].set(b, xb ^ xa);
        row_z_[r].set(a, za ^ zb);
    }
}

void SymbolicTableau::apply_cz(uint32_t a, uint32_t b) {
    for (size_t r = 0; r < 2 * n_; r++) {
        bool xa = row_x_[r].get(a), za = row_z_[r].get(a);
        bool xb = row_x_[r].get(b), zb = row_z_[r].get(b);
        if (xa && xb && (za ^ zb)) sign_[r].constant ^= true;
        row_z_[r].set(a, za ^ xb);
        row_z_[r].set(b, zb ^ xa);
    }
}

SignExpr SymbolicTableau::measure(const BitVec& ox, const BitVec& oz) {
    size_t pivot = SIZE_MAX;
    for (size_t r = n_; r < 2 * n_; r++) {
        if (anticommutes(r, ox, oz)) { pivot = r; break; }
    }
    if (pivot != SIZE_MAX) {
        for (size_t r = 0; r < 2 * n_; r++) {
            if (r != pivot && anticommutes(r, ox, oz)) row_mul(r, pivot);
        }
        // Old stabilizer becomes the destabilizer of the measured operator.
        size_t d = pivot - n_;
        row_x_[d] = row_x_[pivot];
        row_z_[d] = row_z_[pivot];
        sign_[d] = sign_[pivot];
        row_x_[pivot] = ox;
        row_z_[pivot] = oz;
        if (next_symbol_ >= symbol_capacity_)
            throw std::logic_error("symbol capacity exceeded");
        SignExpr e(symbol_capacity_);
        e.symbols.set(next_symbol_++, true);
        sign_[pivot] = e;
        return e;
    }
    // Deterministic: O = +/- product of stabilizers selected by destabilizer
    // anticommutation. Accumulate in a scratch row.
    BitVec sx(n_), sz(n_);
    SignExpr se(symbol_capacity_);
    uint32_t imag = 0;
    for (size_t i = 0; i < n_; i++) {
        if (!anticommutes(i, ox, oz)) continue;
        size_t s = n_ + i;
        for (size_t k = 0; k < sx.words.size(); k++) {
            uint64_t x1 = sx.words[k], z1 = sz.words[k];
            uint64_t x2 = row_x_[s].words[k], z2 = row_z_[s].words[k];
            uint64_t tx = x1 & ~z1, tz = z1 & ~x1, ty = x1 & z1;
            uint64_t o2x = x2 & ~z2, o2z = z2 & ~x2, o2y = x2 & z2;
            imag += __builtin_popcountll((tx & o2y) | (tz & o2x) | (ty & o2z));
            imag += 3u * __builtin_popcountll((tx & o2z) | (tz & o2y) | (ty & o2x));
        }
        se.xor_with(sign_[s]);
        sx.xor_with(row_x_[s]);
        sz.xor_with(row_z_[s]);
    }
    if (!(sx == ox && sz == oz))
        throw std::logic_error("deterministic measurement reconstruction failed");
    assert((imag & 1) == 0);
    if (imag & 2) se.constant ^= true;
    return se;
}

SignExpr SymbolicTableau::measure_x(uint32_t q) {
    BitVec ox(n_), oz(n_);
    ox.set(q, true);
    return measure(ox, oz);
}

SignExpr SymbolicTableau::measure_z(uint32_t q) {
    BitVec ox(n_), oz(n_);
    oz.set(q, true);
    return measure(ox, oz);
}

void SymbolicTableau::cond_flip_sign_where_x(uint32_t q, const SignExpr& e) {
    for (size_t r = 0; r < 2 * n_; r++)
        if (row_x_[r].get(q)) sign_[r].xor_with(e);
}

void SymbolicTableau::cond_flip_sign_where_z(uint32_t q, const SignExpr& e) {
    for (size_t r = 0; r < 2 * n_; r++)
        if (row_z_[r].get(q)) sign_[r].xor_with(e);
}

void SymbolicTableau::reset_plus(uint32_t q) {
    SignExpr e = measure_x(q);
    // Conditionally apply Z to pin the fresh state to +X. The discarded
    // outcome symbol survives only where physically warranted (e.g. a reset
    // sever of an entangled partner leaves the partner mixed).
    cond_flip_sign_where_x(q, e);
}

void SymbolicTableau::reset_zero(uint32_t q) {
    SignExpr e = measure_z(q);
    cond_flip_sign_where_z(q, e);
}

}  // namespace biasq
