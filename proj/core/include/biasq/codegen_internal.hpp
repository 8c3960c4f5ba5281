#pragma once

#include <algorithm>
#include <vector>

#include "biasq/codegen.hpp"

namespace biasq::detail {

/// Symmetric difference of sorted record sets (record parities compose by XOR).
inline std::vector<uint32_t> xor_set(const std::vector<uint32_t>& a,
                                     const std::vector<uint32_t>& b) {
    std::vector<uint32_t> out;
    out.reserve(a.size() + b.size());
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(out));
    return out;
}

inline void xor_into(std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    a = xor_set(a, b);
}

inline void xor_into(std::vector<uint32_t>& a, uint32_t rec) {
    xor_into(a, std::vector<uint32_t>{rec});
}

/// Zero-basis diagnostic variants: same circuit body and noise sites, but the
/// memory is prepared/read in Z so the normally-virtual logical becomes an
/// ordinary record observable (exercised by validate and fault-alignment
/// tests). Not part of the CLI surface.
GeneratedCircuit build_rep_mz4_alternated_diag_zero(const CodeSpec& spec, const NoiseParams& noise);
GeneratedCircuit build_rep_mz4_simultaneous_diag_zero(const CodeSpec& spec, const NoiseParams& noise);
GeneratedCircuit build_rep_bpcnot_diag_zero(const CodeSpec& spec, const NoiseParams& noise);

}  // namespace biasq::detail
