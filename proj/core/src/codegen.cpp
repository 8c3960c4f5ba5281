#include "biasq/codegen.hpp"

#include <stdexcept>

namespace biasq {

std::string family_name(CodeFamily f) {
    switch (f) {
        case CodeFamily::RepMZ4Alternated: return "rep_mz4_alternated";
        case CodeFamily::RepMZ4Simultaneous: return "rep_mz4_simultaneous";
        case CodeFamily::RepBPCNOT: return "rep_bpcnot";
        case CodeFamily::RepCZPhysical: return "rep_cz_physical";
        case CodeFamily::RepCZKnill: return "rep_cz_knill";
        case CodeFamily::XZZX_MZ4: return "xzzx_mz4";
        case CodeFamily::RotatedSC_DepolCX: return "rotated_sc_depolcx";
    }
    return "?";
}

std::optional<CodeFamily> family_from_name(const std::string& s) {
    for (CodeFamily f : {CodeFamily::RepMZ4Alternated, CodeFamily::RepMZ4Simultaneous,
                         CodeFamily::RepBPCNOT, CodeFamily::RepCZPhysical,
                         CodeFamily::RepCZKnill, CodeFamily::XZZX_MZ4,
                         CodeFamily::RotatedSC_DepolCX}) {
        if (family_name(f) == s) return f;
    }
    return std::nullopt;
}

FootprintReport footprint(const CodeSpec& spec) {
    switch (spec.family) {
        case CodeFamily::RepMZ4Alternated:
            return {2 * spec.d, 4};
        case CodeFamily::RepMZ4Simultaneous:
            return {3 * spec.d - 2, 2};
        case CodeFamily::RepBPCNOT:
            return {2 * spec.d - 1, 3};
        case CodeFamily::RepCZPhysical: {
            // Data homes and teleport targets as in the alternated schedule,
            // plus one reusable meter per concurrent weight-4 measurement.
            uint32_t meters = spec.d / 2;
            return {2 * spec.d + meters, 2 * (5 * spec.r + 1)};
        }
        case CodeFamily::RepCZKnill: {
            // Two code blocks, a d-qubit GHZ meter, d-1 ZZ ancillas.
            uint32_t steps = spec.r2 * (spec.r1 * 4 + 3) + 1;
            return {4 * spec.d - 1, steps};
        }
        case CodeFamily::XZZX_MZ4: {
            uint32_t n = uint32_t(4 * spec.dx * spec.dz +
                                  2 * (int32_t(spec.dx) - int32_t(spec.dz) - 1));
            return {n, 4};
        }
        case CodeFamily::RotatedSC_DepolCX:
            return {2 * spec.d * spec.d - 1, 6};
    }
    throw std::invalid_argument("unknown family");
}

GeneratedCircuit build_circuit(const CodeSpec& spec, const NoiseParams& noise) {
    switch (spec.family) {
        case CodeFamily::RepMZ4Alternated: return build_rep_mz4_alternated(spec, noise);
        case CodeFamily::RepMZ4Simultaneous: return build_rep_mz4_simultaneous(spec, noise);
        case CodeFamily::RepBPCNOT: return build_rep_bpcnot(spec, noise);
        case CodeFamily::RepCZPhysical: return build_rep_cz_physical(spec, noise);
        case CodeFamily::RepCZKnill: return build_rep_cz_knill(spec, noise);
        case CodeFamily::XZZX_MZ4: return build_xzzx_mz4(spec, noise);
        case CodeFamily::RotatedSC_DepolCX: return build_rotated_sc_depolcx(spec, noise);
    }
    throw std::invalid_argument("unknown family");
}

}  // namespace biasq
