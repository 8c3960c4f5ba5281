#include "doctest.h"

#include <stdexcept>

#include "biasq/circuit.hpp"

using namespace biasq;

TEST_CASE("minimal program parses") {
    Circuit c = parse_circuit("QUBITS 2\nRX 0 1\nCZ 0 1\nMX 0\nDETECTOR rec[-1]\n");
    CHECK(c.qubit_count == 2);
    CHECK(c.measurement_count() == 1);
    CHECK(c.detector_count() == 1);
}

TEST_CASE("MPPZ parses as joint Z product") {
    Circuit c = parse_circuit("QUBITS 4\nMPPZ 0 1 2 3\n");
    CHECK(c.measurement_count() == 1);
    REQUIRE(c.instructions.size() == 1);
    CHECK(c.instructions[0].kind == OpKind::MPPZ);
    CHECK(c.instructions[0].targets == std::vector<uint32_t>{0, 1, 2, 3});
}

TEST_CASE("record offset past first measurement is a parse error") {
    std::string text = "QUBITS 2\nMX 0\nMX 1\nMZ 0\nDETECTOR rec[-5]\n";
    CHECK_THROWS_WITH_AS(parse_circuit(text),
                         doctest::Contains("line 5"), std::runtime_error);
}

TEST_CASE("unknown instruction and malformed probability carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_circuit("QUBITS 1\nFROB 0\n"),
                         doctest::Contains("line 2"), std::runtime_error);
    CHECK_THROWS_AS(parse_circuit("QUBITS 1\nBIASED_PAULI1(0.1,zzz,0.2) 0\n"),
                    std::runtime_error);
    CHECK_THROWS_AS(parse_circuit("QUBITS 1\nBIASED_PAULI1(0.9,0.9,0.9) 0\n"),
                    std::runtime_error);
}

TEST_CASE("comments and blank lines are ignored") {
    Circuit c = parse_circuit("QUBITS 1\n# nothing here\n\nMX 0  # inline\n");
    CHECK(c.measurement_count() == 1);
}

TEST_CASE("round trip through text is the identity on circuits") {
    std::string text =
        "QUBITS 6\n"
        "RX 0 1 2\n"
        "R 3\n"
        "CX 0 1\n"
        "CZ 2 3\n"
        "MPPZ 0 1 2 3\n"
        "FLIP_RESULT(0.001)\n"
        "TICK\n"
        "BIASED_PAULI1(5e-07,5e-07,0.001) 0 1 2 3 4 5\n"
        "PAULI2(IZ:0.000666,ZI:0.000666,ZZ:0.000666) 0 1\n"
        "DEPOLARIZE2(0.002) 4 5\n"
        "MX 4\n"
        "MZ 5\n"
        "DETECTOR rec[-1] rec[-3]\n"
        "OBSERVABLE 0 rec[-2]\n";
    Circuit c1 = parse_circuit(text);
    Circuit c2 = parse_circuit(serialize_circuit(c1));
    CHECK(c1 == c2);
}
