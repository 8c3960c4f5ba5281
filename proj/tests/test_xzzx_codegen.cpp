#include <tuple>
#include <set>

#include "doctest.h"

#include "biasq/codegen.hpp"
#include "biasq/dem.hpp"

using namespace biasq;

namespace {
std::set<uint32_t> touched(const Circuit& c) {
    std::set<uint32_t> qs;
    for (const auto& ins : c.instructions)
        for (uint32_t q : ins.targets) qs.insert(q);
    return qs;
}
}  // namespace

TEST_CASE("xzzx generator validates on both memories and matches footprint") {
    NoiseParams nz;
    nz.pz = 0.003;
    nz.eta = 100;
    for (auto mem : {MemoryBasis::PlusMemory, MemoryBasis::ZeroMemory}) {
        for (auto [dx, dz] : std::vector<std::pair<uint32_t, uint32_t>>{{3, 3}, {3, 5}, {5, 3}}) {
            CodeSpec s;
            s.family = CodeFamily::XZZX_MZ4;
            s.dx = dx;
            s.dz = dz;
            s.rounds = std::max(dx, dz);
            s.memory = mem;
            auto gen = build_xzzx_mz4(s, nz);
            auto diags = validate(gen.circuit);
            if (!diags.empty()) { CAPTURE(diags[0].message); }
            CAPTURE(dx);
            CAPTURE(dz);
            CHECK(diags.empty());
            CHECK(touched(gen.circuit).size() == footprint(s).qubit_count);
        }
    }
    CodeSpec bad;
    bad.family = CodeFamily::XZZX_MZ4;
    bad.dx = 4;
    bad.dz = 5;
    bad.rounds = 5;
    CHECK_THROWS(build_xzzx_mz4(bad, nz));
}

TEST_CASE("rotated surface code validates on both memories") {
    NoiseParams nz;
    nz.pz = 0.001;
    nz.eta = 1e6;
    for (auto mem : {MemoryBasis::PlusMemory, MemoryBasis::ZeroMemory}) {
        CodeSpec s;
        s.family = CodeFamily::RotatedSC_DepolCX;
        s.d = 3;
        s.rounds = 3;
        s.memory = mem;
        auto gen = build_rotated_sc_depolcx(s, nz);
        auto diags = validate(gen.circuit);
        if (!diags.empty()) { CAPTURE(diags[0].message); }
        CHECK(diags.empty());
        CHECK(touched(gen.circuit).size() == footprint(s).qubit_count);
    }
}

TEST_CASE("pcx evaluates per its closed form") {
    NoiseParams nz;
    nz.pz = 1e-3;
    nz.eta = 1e6;
    CHECK(nz.pcx() == doctest::Approx(2.000002e-3).epsilon(1e-9));
}

TEST_CASE("cz-physical and knill schemes validate") {
    NoiseParams nz;
    nz.pz = 1e-3;
    nz.eta = 1;
    nz.px_explicit = 0.0;
    {
        CodeSpec s;
        s.family = CodeFamily::RepCZPhysical;
        s.d = 4;  // the appendix figure's layout
        s.rounds = 2;
        s.r = 2;
        auto gen = build_rep_cz_physical(s, nz);
        auto diags = validate(gen.circuit);
        if (!diags.empty()) { CAPTURE(diags[0].message); }
        CHECK(diags.empty());
        // 2d slots plus one reusable meter per concurrent weight-4 check.
        CHECK(footprint(s).qubit_count == 10);
        CHECK(touched(gen.circuit).size() == 10);
        CodeSpec bad = s;
        bad.r = 0;
        CHECK_THROWS(build_rep_cz_physical(bad, nz));
    }
    {
        CodeSpec s;
        s.family = CodeFamily::RepCZKnill;
        s.d = 3;
        s.rounds = 2;
        s.r1 = 2;
        s.r2 = 2;
        auto gen = build_rep_cz_knill(s, nz);
        auto diags = validate(gen.circuit);
        if (!diags.empty()) { CAPTURE(diags[0].message); }
        CHECK(diags.empty());
        CHECK(footprint(s).qubit_count == 11);  // 4d - 1
        // GHZ prep uses d-1 = 2 shared ancillas.
        std::set<uint32_t> zz_ancs;
        for (const auto& ins : gen.circuit.instructions)
            for (uint32_t q : ins.targets)
                if (q >= 9) zz_ancs.insert(q);
        CHECK(zz_ancs.size() == 2);
    }
}

TEST_CASE("xzzx boundary structure: helper sites are reset every other round") {
    NoiseParams nz;
    nz.pz = 0.002;
    nz.eta = 1000;
    CodeSpec s;
    s.family = CodeFamily::XZZX_MZ4;
    s.dx = 3;
    s.dz = 3;
    s.rounds = 4;
    s.memory = MemoryBasis::PlusMemory;
    auto gen = build_xzzx_mz4(s, nz);
    // 2(dx-1) helper sites = 4 helpers = qubits [2*(9+4), 2*17).
    uint32_t helper_lo = 2 * (9 + 4);
    size_t helper_resets = 0;
    for (const auto& ins : gen.circuit.instructions)
        if (ins.kind == OpKind::ResetPlus)
            for (uint32_t q : ins.targets)
                if (q >= helper_lo) helper_resets++;
    // One reset per helper per measurement of its plaquette (every 2 rounds),
    // plus the initial preparation.
    CHECK(helper_resets == 4 + 4 * (s.rounds / 2));
}

TEST_CASE("xzzx zero vs plus memory mirror in the bulk at square distance") {
    // The boundary-exchange companion of the plus memory under Z noise is the
    // zero memory under X noise. The helper qubits live on one boundary type
    // only (the footprint 4 dx dz + 2(dx-dz-1) is likewise asymmetric), so the
    // exchange is exact for the bulk fault classes, not the helper boundary.
    NoiseParams nz;
    nz.pz = 0.002;
    nz.eta = 1;
    nz.px_explicit = 0.0;  // pure phase noise on the plus side
    CodeSpec s;
    s.family = CodeFamily::XZZX_MZ4;
    s.dx = 3;
    s.dz = 3;
    s.rounds = 4;
    s.memory = MemoryBasis::PlusMemory;
    auto plus = build_xzzx_mz4(s, nz);
    s.memory = MemoryBasis::ZeroMemory;
    auto zero = build_xzzx_mz4(s, nz);
    // Mirror the noise X<->Z on the zero-memory circuit.
    Circuit mirrored = zero.circuit;
    OpKind last_meas = OpKind::Tick;
    for (auto& ins : mirrored.instructions) {
        if (ins.kind == OpKind::BiasedPauli1) std::swap(ins.args[0], ins.args[2]);
        else if (ins.kind == OpKind::MX || ins.kind == OpKind::MZ || ins.kind == OpKind::MPPZ)
            last_meas = ins.kind;
        else if (ins.kind == OpKind::FlipLastResult)
            ins.args[0] = (last_meas == OpKind::MX) ? 0.0 : nz.pz;
    }
    auto dem_p = extract_dem(plus.circuit);
    auto dem_z = extract_dem(mirrored);
    CHECK(dem_p.detector_count == dem_z.detector_count);
    auto census = [](const DetectorErrorModel& dem, size_t ndet, size_t nobs) {
        size_t n = 0;
        for (const auto& mech : dem.mechanisms)
            if (mech.detectors.size() == ndet && mech.observables.size() == nobs) n++;
        return n;
    };
    // Bulk two-detector mechanisms and logical-flagged boundary mechanisms
    // exchange exactly.
    CHECK(census(dem_p, 2, 0) == census(dem_z, 2, 0));
    CHECK(census(dem_p, 1, 1) == census(dem_z, 1, 1));
    CHECK(census(dem_p, 2, 1) == census(dem_z, 2, 1));
}
