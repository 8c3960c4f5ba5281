#include "biasq/overhead.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace biasq {

OverheadPoint optimize_xzzx(double target, double pz, double eta, const FitResult& fit_plus,
                            const FitResult& fit_zero, const OverheadCaps& caps) {
    OverheadPoint best;
    best.target_ler = target;
    best.strategy = CodeFamily::XZZX_MZ4;
    best.extrapolated = eta > 1e3;
    bool found = false;
    for (uint32_t dx = 3; dx <= caps.max_dx; dx += 2) {
        for (uint32_t dz = 3; dz <= caps.max_dz; dz += 2) {
            double p = eval_ansatz_plus(fit_plus, dx, dz, pz, eta) +
                       eval_ansatz_zero(fit_zero, dx, dz, pz, eta);
            if (p > target) continue;
            CodeSpec s;
            s.family = CodeFamily::XZZX_MZ4;
            s.dx = dx;
            s.dz = dz;
            uint32_t n = footprint(s).qubit_count;
            if (!found || n < best.qubits) {
                found = true;
                best.qubits = n;
                best.dx = dx;
                best.dz = dz;
                best.achieved_ler = p;
            }
        }
    }
    if (!found)
        throw std::runtime_error("target unreachable within caps dx<=" +
                                 std::to_string(caps.max_dx) + ", dz<=" +
                                 std::to_string(caps.max_dz));
    return best;
}

OverheadPoint optimize_rotated_sc(double target, double pz, double eta, const FitResult& fit_sc,
                                  const OverheadCaps& caps) {
    OverheadPoint best;
    best.target_ler = target;
    best.strategy = CodeFamily::RotatedSC_DepolCX;
    for (uint32_t d = 3; d <= caps.max_d; d += 2) {
        double p = eval_ansatz_sc(fit_sc, d, pz, eta);
        if (p > target) continue;
        best.d = d;
        best.qubits = 2 * d * d - 1;
        best.achieved_ler = p;
        return best;
    }
    throw std::runtime_error("target unreachable within cap d<=" + std::to_string(caps.max_d));
}

OverheadPoint optimize_repetition(double target, CodeFamily strategy,
                                  const RepOverheadModel& model, const OverheadCaps& caps) {
    OverheadPoint best;
    best.target_ler = target;
    best.strategy = strategy;
    double floor_min = 1e300;
    for (uint32_t d = 3; d <= caps.max_d; d += 2) {
        double floor = model.floor_per_distance * double(d);
        floor_min = std::min(floor_min, floor);
        double p = model.A * std::pow(model.lambda, -double(d) / 2) + floor;
        if (p > target) continue;
        best.d = d;
        switch (strategy) {
            case CodeFamily::RepMZ4Alternated: best.qubits = 2 * d; break;
            case CodeFamily::RepMZ4Simultaneous: best.qubits = 3 * d - 2; break;
            case CodeFamily::RepBPCNOT: best.qubits = 2 * d - 1; break;
            default: throw std::invalid_argument("not a repetition strategy");
        }
        best.achieved_ler = p;
        return best;
    }
    throw std::runtime_error("floor-limited: best reachable floor " + std::to_string(floor_min) +
                             " exceeds target " + std::to_string(target));
}

}  // namespace biasq
