#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace biasq {

struct ShotStats {
    uint64_t shots = 0;
    uint64_t errors = 0;
    double ler_shot = 0;
    uint32_t rounds = 1;
    double ler_cycle = 0;
    double ci_low = 0, ci_high = 0;
    std::string stopped_by;  // "max_shots" or "max_errors"
};

/// Per-cycle rate from a per-shot rate: 1 - (1 - p)^(1/rounds).
double per_cycle(double ler_shot, uint32_t rounds);

/// 95% Wilson interval; rule-of-three upper bound when errors == 0.
std::pair<double, double> ci_bounds(uint64_t shots, uint64_t errors);

ShotStats make_stats(uint64_t shots, uint64_t errors, uint32_t rounds);

enum class FitModel : uint8_t { AnsatzPlus, AnsatzZero, AnsatzSC, RepcodeLambda, PthEta };

struct FitResult {
    FitModel model;
    std::map<std::string, double> params;
    double residual = 0;
    uint32_t points_used = 0;
    std::vector<std::string> warnings;
};

struct XzzxPoint {
    uint32_t dx, dz;
    double pz, eta;
    double ler;               // per cycle
    double weight = 1.0;      // typically 1 / log-CI-width^2
    uint64_t errors = 1;
};

struct RepPoint {
    uint32_t d;
    double pz;
    double ler_cycle;
    double weight = 1.0;
    uint64_t errors = 1;
};

struct ScPoint {
    uint32_t d;
    double pz;
    double ler;
    double weight = 1.0;
    uint64_t errors = 1;
};

/// Global log-space fit of A, p_inf, C, gamma over all eta.
FitResult fit_ansatz_plus(const std::vector<XzzxPoint>& points);
/// Degenerate single-eta design: fits A and the threshold at that eta only.
FitResult fit_ansatz_plus_per_eta(const std::vector<XzzxPoint>& points);
/// Global log-space fit of A', p_xth, beta, alpha. Optional theory constraint
/// pins alpha = beta = 1.
FitResult fit_ansatz_zero(const std::vector<XzzxPoint>& points, bool constrain_theory = false);
/// Single-eta design: the bias exponent is unidentifiable, so the effective
/// denominator eta^beta p_xth is fitted as one threshold (beta reported 0).
FitResult fit_ansatz_zero_per_eta(const std::vector<XzzxPoint>& points);
/// Per-memory surface-code fit of (A_SC, p_th); thresholds quoted in pz units.
FitResult fit_ansatz_sc(const std::vector<ScPoint>& points);
/// Per-pz exponential fits Lambda(pz), A(pz), then the power-law threshold
/// where Lambda = 1.
FitResult fit_repcode_lambda(const std::vector<RepPoint>& points);
/// Fit of p_inf (1 - C eta^-gamma) to per-eta thresholds.
FitResult fit_pth_eta(const std::vector<std::pair<double, double>>& eta_pth);

/// Circuit-level effective threshold from the error-opportunity count.
double neff_threshold(uint32_t n_eff);

// Model evaluations shared with the overhead optimizer.
double eval_ansatz_plus(const FitResult& fit, uint32_t dx, uint32_t dz, double pz, double eta);
double eval_ansatz_zero(const FitResult& fit, uint32_t dx, uint32_t dz, double pz, double eta);
double eval_ansatz_sc(const FitResult& fit, uint32_t d, double pz, double eta);
double eval_pth_eta(double p_inf, double C, double gamma, double eta);

/// Derivative-free bounded simplex minimizer with deterministic random
/// restarts; returns the best parameter vector.
std::vector<double> nelder_mead_restarts(
    const std::vector<std::pair<double, double>>& bounds,
    const std::vector<double>& init,
    int restarts, int max_iter, uint64_t seed,
    double (*f)(const std::vector<double>&, const void*), const void* ctx,
    double* best_value = nullptr);

}  // namespace biasq
