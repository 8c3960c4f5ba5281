#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biasq/circuit.hpp"
#include "biasq/sampler.hpp"

namespace biasq {

enum class CodeFamily : uint8_t {
    RepMZ4Alternated,
    RepMZ4Simultaneous,
    RepBPCNOT,
    RepCZPhysical,
    RepCZKnill,
    XZZX_MZ4,
    RotatedSC_DepolCX,
};

enum class MemoryBasis : uint8_t { PlusMemory, ZeroMemory };

std::string family_name(CodeFamily f);
std::optional<CodeFamily> family_from_name(const std::string& s);

/// Per-operation noise strengths. `px` is the total X+Y weight; when not set
/// explicitly it defaults to pz/eta (the convention of the moderate-bias
/// sections, where PAULI_1(px/2, px/2, pz)).
struct NoiseParams {
    double pz = 0;
    double eta = 1;
    std::optional<double> px_explicit;

    double px() const { return px_explicit ? *px_explicit : pz / eta; }
    double pcx() const { return 2.0 * pz * (1.0 + 1.0 / eta); }
};

struct CodeSpec {
    CodeFamily family = CodeFamily::RepMZ4Alternated;
    uint32_t d = 3;
    uint32_t dx = 3, dz = 3;  // XZZX only
    uint32_t rounds = 1;
    MemoryBasis memory = MemoryBasis::PlusMemory;
    uint32_t r = 1;           // RepCZPhysical repetitions
    uint32_t r1 = 1, r2 = 1;  // RepCZKnill repetitions
};

struct FootprintReport {
    uint32_t qubit_count = 0;
    uint32_t timesteps_per_round = 0;
};

/// Closed-form qubit/timestep counts; must match the generated circuits.
FootprintReport footprint(const CodeSpec& spec);

/// A generated memory experiment. Observable 0 is the protected logical
/// readout. For phase-flip-only codes, `bitflip_observable` adds a virtual
/// observable tracking the unprotected logical (records XOR end-frame parity);
/// it exists in the sampled/DEM view but not in the circuit text.
struct GeneratedCircuit {
    Circuit circuit;
    std::vector<FrameObservable> frame_observables;
    FootprintReport footprint;
    CodeSpec spec;
    // Data-slot physical positions recorded at each idle-noise layer, for
    // static noise-accounting checks (repetition families).
    std::vector<std::vector<uint32_t>> noise_layer_slot_positions;
};

GeneratedCircuit build_rep_mz4_alternated(const CodeSpec& spec, const NoiseParams& noise);
GeneratedCircuit build_rep_mz4_simultaneous(const CodeSpec& spec, const NoiseParams& noise);
GeneratedCircuit build_rep_bpcnot(const CodeSpec& spec, const NoiseParams& noise);
GeneratedCircuit build_rep_cz_physical(const CodeSpec& spec, const NoiseParams& noise);
GeneratedCircuit build_rep_cz_knill(const CodeSpec& spec, const NoiseParams& noise);
GeneratedCircuit build_xzzx_mz4(const CodeSpec& spec, const NoiseParams& noise);
GeneratedCircuit build_rotated_sc_depolcx(const CodeSpec& spec, const NoiseParams& noise);

GeneratedCircuit build_circuit(const CodeSpec& spec, const NoiseParams& noise);

/// A teleportation gadget: the circuit plus the Pauli frame it leaves behind.
/// Corrections are record sets, not gates; `outcome_records` XOR to the
/// reported measurement outcome for measurement gadgets.
struct GadgetCircuit {
    Circuit circuit;
    struct Correction {
        uint32_t qubit;
        char pauli;                     // 'X' or 'Z'
        std::vector<uint32_t> records;  // absolute indices; XOR = exponent
    };
    std::vector<Correction> corrections;
    std::vector<uint32_t> outcome_records;
    std::vector<uint32_t> input_qubits;
    std::vector<uint32_t> output_qubits;
    // Redundant-check parity (empty unless requested): deterministically zero
    // without faults.
    std::vector<uint32_t> check_records;
};

/// CX gate from a QND Z^3 measurement plus an X readout: inputs (control,
/// target), output control stays in place, target state lands on the extra
/// qubit. Qubits: 0 control, 1 target (measured), 2 extra.
GadgetCircuit gadget_cx_via_mz3();

/// X(x)X parity check via one Z^4 measurement; outcome = m1 xor m2.
/// Qubits: 0,2 ancillas (outputs), 1,3 inputs.
GadgetCircuit gadget_xx_via_mz4();

/// ZXXZ measurement: the XX gadget conjugated by CZ on the outer pairs.
/// Qubits: 0,3 outer Z legs; 1,2 inner X legs (inputs); 4,5 ancillas (outputs).
GadgetCircuit gadget_zxxz_via_mz4();

/// X^4 parity measurement from three overlapping Z^4 measurements
/// (four data 0..3 teleport onto ancillas 4..7); outcome = product of the four
/// MX results. With `redundant`, a fourth Z^4 closes the cycle and its parity
/// with the other three becomes a fault detector.
GadgetCircuit gadget_mx4_via_three_mz4(bool redundant);

}  // namespace biasq
