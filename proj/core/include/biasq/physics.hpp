#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace biasq {

/// Electron-nuclear register driven by a multi-tone comb.
struct SpinSystemParams {
    uint32_t q = 1;
    double gamma_e = 0;       // rad s^-1 T^-1
    double gamma_n = 0;
    double b0 = 0;            // T
    std::vector<double> a;    // hyperfine strengths, rad/s
    double b_bar = 0;         // drive amplitude, T
};

struct CombTone {
    double omega;     // rad/s
    uint32_t multiplicity;
};

struct SpinComb {
    std::vector<CombTone> tones;  // merged, ascending
    double t_pulse;               // 2 pi / (gamma_e * b_bar)
    uint32_t raw_tone_count;      // 2^(q-1) before merging
};

/// One comb tone per odd-parity hyperfine configuration.
SpinComb spin_drive_comb(const SpinSystemParams& params);

struct CouplingInputs {
    double ej = 0;        // J
    double eps_bar = 0;   // pump amplitude for the two-photon process
    double eps_sigma = 0; // pump amplitude for the three-mode process
    double phi_aa = 0;    // participation of the cat mode at its own ATS
    double phi_b = 0;     // buffer participation
    std::array<double, 3> phi_a{};  // the three cat-mode participations
    double hbar = 1.054571817e-34;
};

/// (g_2ph, g_Z) from the junction energy, pump amplitudes and participations.
std::pair<double, double> cat_couplings(const CouplingInputs& in);

struct CatReadoutParams {
    double g2ph = 0;     // rad/s
    double gz = 0;
    double gamma_b = 0;  // buffer decay
    double alpha = 0;    // cat amplitude
    std::array<int, 3> z{1, 1, 1};
};

struct CatSteadyState {
    double zeta;
    double nu;
    std::complex<double> b_sigma;
    double gamma_meas;
};

/// Closed-form steady state of the linearized three-cat readout.
CatSteadyState cat_readout_steady_state(const CatReadoutParams& p);

/// Integrates the six linearized mode equations to steady state and returns
/// the max relative deviation from the closed-form fixed point.
double cat_linearized_ode_check(const CatReadoutParams& p, double duration, double step);

}  // namespace biasq
