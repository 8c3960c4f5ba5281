#pragma once

#include <cstdint>
#include <optional>

#include "biasq/analysis.hpp"
#include "biasq/codegen.hpp"

namespace biasq {

struct OverheadPoint {
    double target_ler = 0;
    uint32_t qubits = 0;
    uint32_t d = 0, dx = 0, dz = 0;
    double achieved_ler = 0;
    CodeFamily strategy = CodeFamily::XZZX_MZ4;
    bool extrapolated = false;
};

struct OverheadCaps {
    uint32_t max_dx = 21;
    uint32_t max_dz = 61;
    uint32_t max_d = 201;
};

/// Minimal-footprint asymmetric XZZX patch meeting the target total LER.
OverheadPoint optimize_xzzx(double target, double pz, double eta,
                            const FitResult& fit_plus, const FitResult& fit_zero,
                            const OverheadCaps& caps = {});

OverheadPoint optimize_rotated_sc(double target, double pz, double eta,
                                  const FitResult& fit_sc, const OverheadCaps& caps = {});

/// Repetition strategies: phase-flip suppression A Lambda^{-d/2} plus the
/// linear-in-d bit-flip floor; throws a floor-limited error when the target
/// lies below reach at every distance.
struct RepOverheadModel {
    double A = 0.1;
    double lambda = 10.0;
    double floor_per_distance = 0.0;  // per-cycle floor ~ c * d
};

OverheadPoint optimize_repetition(double target, CodeFamily strategy,
                                  const RepOverheadModel& model,
                                  const OverheadCaps& caps = {});

}  // namespace biasq
