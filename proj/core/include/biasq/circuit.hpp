#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biasq/pauli.hpp"

namespace biasq {

enum class OpKind : uint8_t {
    ResetPlus,      // RX q+
    ResetZero,      // R q+
    CX,             // CX a b
    CZ,             // CZ a b
    MX,             // MX q+  (one record per target)
    MZ,             // MZ q+
    MPPZ,           // MPPZ q1..qk  (single record, joint Z product)
    Tick,           // TICK
    BiasedPauli1,   // BIASED_PAULI1(px2,py2,pz) q+
    Pauli2,         // PAULI2(label:p,...) a b
    Depolarize2,    // DEPOLARIZE2(p) a b
    FlipLastResult, // FLIP_RESULT(p)
    Detector,       // DETECTOR rec[-k]+
    Observable,     // OBSERVABLE idx rec[-k]+
};

/// One two-qubit Pauli term, e.g. {"IZ", 6.7e-4}. The first letter acts on the
/// instruction's first target, the second letter on the second.
struct Pauli2Term {
    char first;
    char second;
    double p;
};

struct Instruction {
    OpKind kind;
    std::vector<uint32_t> targets;
    std::vector<double> args;        // channel probabilities, per kind
    std::vector<Pauli2Term> terms;   // Pauli2 only
    std::vector<int32_t> rec;        // Detector/Observable: negative offsets
    uint32_t index = 0;              // Observable index

    bool operator==(const Instruction& o) const;
};

struct Circuit {
    uint32_t qubit_count = 0;
    std::vector<Instruction> instructions;

    uint32_t measurement_count() const;
    uint32_t detector_count() const;
    uint32_t observable_count() const;

    void append(Instruction ins) { instructions.push_back(std::move(ins)); }

    // Convenience builders used by the generators.
    void rx(std::initializer_list<uint32_t> qs) { append({OpKind::ResetPlus, qs}); }
    void rx(const std::vector<uint32_t>& qs) { append({OpKind::ResetPlus, qs}); }
    void rz(const std::vector<uint32_t>& qs) { append({OpKind::ResetZero, qs}); }
    void cx(uint32_t a, uint32_t b) { append({OpKind::CX, {a, b}}); }
    void cz(uint32_t a, uint32_t b) { append({OpKind::CZ, {a, b}}); }
    void tick() { append({OpKind::Tick, {}}); }
    /// Returns the absolute record index of the new measurement.
    uint32_t mx(uint32_t q);
    uint32_t mz(uint32_t q);
    uint32_t mppz(const std::vector<uint32_t>& qs);
    void flip_result(double p);
    void biased_pauli1(const std::vector<uint32_t>& qs, double px2, double py2, double pz);
    void pauli2(uint32_t a, uint32_t b, std::vector<Pauli2Term> terms);
    void depolarize2(uint32_t a, uint32_t b, double p);
    /// Detector/observable over absolute record indices (converted to offsets).
    void detector_abs(const std::vector<uint32_t>& records);
    void observable_abs(uint32_t idx, const std::vector<uint32_t>& records);

    std::string str() const;
    bool operator==(const Circuit& o) const = default;

  private:
    uint32_t num_measurements_ = 0;

  public:
    uint32_t record_cursor() const { return num_measurements_; }
};

struct ParseError {
    size_t line;
    std::string message;
};

/// Parses the line-oriented circuit text format. Throws std::runtime_error
/// with "line N: ..." on malformed input.
Circuit parse_circuit(const std::string& text);

std::string serialize_circuit(const Circuit& c);

struct Diagnostic {
    std::string message;
    std::optional<size_t> instruction_index;
};

/// Structural checks plus a symbolic noise-free simulation; returns an empty
/// list iff every invariant holds and every detector/observable is
/// deterministically zero in the noiseless circuit.
std::vector<Diagnostic> validate(const Circuit& c);

}  // namespace biasq
