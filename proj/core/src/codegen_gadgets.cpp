#include "biasq/codegen_internal.hpp"

namespace biasq {

GadgetCircuit gadget_cx_via_mz3() {
    GadgetCircuit g;
    Circuit& c = g.circuit;
    c.qubit_count = 3;
    c.rx({2});
    uint32_t s = c.mppz({0, 1, 2});
    uint32_t m = c.mx(1);
    g.corrections.push_back({2, 'X', {s}});
    // The feedforward Z from the X readout acts on both output qubits.
    g.corrections.push_back({2, 'Z', {m}});
    g.corrections.push_back({0, 'Z', {m}});
    g.input_qubits = {0, 1};
    g.output_qubits = {0, 2};
    return g;
}

GadgetCircuit gadget_xx_via_mz4() {
    GadgetCircuit g;
    Circuit& c = g.circuit;
    c.qubit_count = 4;
    c.rx({0, 2});
    uint32_t s = c.mppz({0, 1, 2, 3});
    uint32_t m1 = c.mx(1);
    uint32_t m2 = c.mx(3);
    g.outcome_records = {m1, m2};
    g.corrections.push_back({0, 'X', {s}});
    g.corrections.push_back({0, 'Z', {m1}});
    g.corrections.push_back({2, 'Z', {m2}});
    g.input_qubits = {1, 3};
    g.output_qubits = {0, 2};
    return g;
}

GadgetCircuit gadget_zxxz_via_mz4() {
    // ZXXZ on (0,1,2,3) = the XX gadget on the inner pair conjugated by CZ
    // onto the outer legs; teleported X legs land on 4 and 5.
    GadgetCircuit g;
    Circuit& c = g.circuit;
    c.qubit_count = 6;
    c.cz(1, 0);
    c.cz(2, 3);
    c.rx({4, 5});
    uint32_t s = c.mppz({4, 1, 5, 2});
    uint32_t m1 = c.mx(1);
    uint32_t m2 = c.mx(2);
    c.cz(4, 0);
    c.cz(5, 3);
    g.outcome_records = {m1, m2};
    g.corrections.push_back({4, 'X', {s}});
    g.corrections.push_back({0, 'Z', {s}});
    g.corrections.push_back({4, 'Z', {m1}});
    g.corrections.push_back({5, 'Z', {m2}});
    g.input_qubits = {0, 1, 2, 3};
    g.output_qubits = {0, 4, 5, 3};
    return g;
}

GadgetCircuit gadget_mx4_via_three_mz4(bool redundant) {
    GadgetCircuit g;
    Circuit& c = g.circuit;
    c.qubit_count = 8;  // data 0..3, ancillas 4..7
    c.rx({4, 5, 6, 7});
    uint32_t s1 = c.mppz({4, 0, 5, 1});
    uint32_t s3 = c.mppz({6, 2, 7, 3});
    uint32_t s2 = c.mppz({5, 1, 6, 2});
    uint32_t s4 = 0;
    if (redundant) s4 = c.mppz({7, 3, 4, 0});
    std::vector<uint32_t> m(4);
    for (uint32_t i = 0; i < 4; i++) m[i] = c.mx(i);
    g.outcome_records = m;
    for (uint32_t i = 0; i < 4; i++) g.corrections.push_back({4 + i, 'Z', {m[i]}});
    g.corrections.push_back({5, 'X', {s1}});
    g.corrections.push_back({6, 'X', {s1, s2}});
    g.corrections.push_back({7, 'X', {s1, s2, s3}});
    if (redundant) g.check_records = {s1, s2, s3, s4};
    g.input_qubits = {0, 1, 2, 3};
    g.output_qubits = {4, 5, 6, 7};
    return g;
}

}  // namespace biasq
