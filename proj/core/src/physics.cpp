#include "biasq/physics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace biasq {

SpinComb spin_drive_comb(const SpinSystemParams& params) {
    if (params.q < 1 || params.a.size() != params.q)
        throw std::invalid_argument("need one hyperfine strength per spin");
    if (params.b_bar <= 0) throw std::invalid_argument("drive amplitude must be positive");
    SpinComb comb;
    comb.t_pulse = 2.0 * M_PI / (params.gamma_e * params.b_bar);
    comb.raw_tone_count = uint32_t(1) << (params.q - 1);

    std::vector<double> raw;
    for (uint32_t r = 0; r < (uint32_t(1) << params.q); r++) {
        if (__builtin_popcount(r) % 2 == 0) continue;
        double sum = 0;
        for (uint32_t k = 0; k < params.q; k++)
            sum += ((r >> k) & 1) ? -params.a[k] : params.a[k];
        raw.push_back(params.gamma_e * params.b0 - 0.5 * sum);
    }
    std::sort(raw.begin(), raw.end());
    double scale = std::abs(params.gamma_e * params.b0);
    for (double a : params.a) scale = std::max(scale, std::abs(a));
    for (double w : raw) {
        if (!comb.tones.empty() && std::abs(w - comb.tones.back().omega) <= 1e-9 * scale) {
            comb.tones.back().multiplicity++;
        } else {
            comb.tones.push_back({w, 1});
        }
    }
    return comb;
}

std::pair<double, double> cat_couplings(const CouplingInputs& in) {
    double g2ph = in.ej * in.eps_bar * in.phi_aa * in.phi_aa * in.phi_b / in.hbar;
    double gz = 2.0 * in.ej * in.eps_sigma * in.phi_a[0] * in.phi_a[1] * in.phi_a[2] / in.hbar;
    return {g2ph, gz};
}

CatSteadyState cat_readout_steady_state(const CatReadoutParams& p) {
    CatSteadyState out;
    out.zeta = std::sqrt(3.0) * p.alpha * p.gz / (2.0 * p.g2ph);
    out.nu = p.gz * p.gamma_b / (4.0 * p.alpha * p.g2ph * p.g2ph);
    if (out.nu >= 1.0) throw std::runtime_error("unstable readout regime: nu >= 1");
    int zzz = p.z[0] * p.z[1] * p.z[2];
    out.b_sigma = -out.zeta / (1.0 - out.nu * out.nu) *
                  std::complex<double>(double(zzz), out.nu);
    out.gamma_meas = 2.0 * p.gamma_b * out.zeta * out.zeta;
    return out;
}

namespace {

using cvec = std::array<std::complex<double>, 6>;  // (da1..3, db1..3)

// c-number reduction of the linearized mode equations with vacuum inputs.
cvec derivative(const CatReadoutParams& p, const cvec& y) {
    const std::complex<double> I(0, 1);
    cvec dy;
    for (int k = 0; k < 3; k++) {
        int k2 = (k + 1) % 3, k3 = (k + 2) % 3;
        std::complex<double> da = y[k], db = y[3 + k];
        std::complex<double> da2 = y[k2], da3 = y[k3];
        dy[k] = -2.0 * I * p.g2ph * p.alpha * double(p.z[k]) * db -
                I * p.gz * p.alpha * p.alpha * double(p.z[k2] * p.z[k3]) -
                I * p.gz * p.alpha *
                    (double(p.z[k2]) * std::conj(da3) + double(p.z[k3]) * std::conj(da2));
        dy[3 + k] = -2.0 * I * p.g2ph * p.alpha * double(p.z[k]) * da - 0.5 * p.gamma_b * db;
    }
    return dy;
}

// Fixed point of the same system by dense Gaussian elimination over the
// 12 real components (the equations couple conjugates, so they are only
// real-linear).
cvec fixed_point(const CatReadoutParams& p) {
    const int n = 12;
    auto idx_re = [](int i) { return 2 * i; };
    auto idx_im = [](int i) { return 2 * i + 1; };
    std::vector<double> M(n * n, 0.0), rhs(n, 0.0);

    // Build d/dt y = L y + c componentwise by probing with basis vectors.
    cvec zero{};
    cvec c0 = derivative(p, zero);
    for (int i = 0; i < 6; i++) {
        rhs[idx_re(i)] = -c0[i].real();
        rhs[idx_im(i)] = -c0[i].imag();
    }
    for (int j = 0; j < 6; j++) {
        for (int part = 0; part < 2; part++) {
            cvec e{};
            e[j] = part == 0 ? std::complex<double>(1, 0) : std::complex<double>(0, 1);
            cvec col = derivative(p, e);
            for (int i = 0; i < 6; i++) {
                std::complex<double> lin = col[i] - c0[i];
                int jc = part == 0 ? idx_re(j) : idx_im(j);
                M[idx_re(i) * n + jc] = lin.real();
                M[idx_im(i) * n + jc] = lin.imag();
            }
        }
    }
    // Solve M y = rhs.
    for (int col = 0; col < n; col++) {
        int piv = col;
        for (int r = col + 1; r < n; r++)
            if (std::abs(M[r * n + col]) > std::abs(M[piv * n + col])) piv = r;
        if (std::abs(M[piv * n + col]) < 1e-14)
            throw std::runtime_error("singular linearized system");
        for (int k = 0; k < n; k++) std::swap(M[col * n + k], M[piv * n + k]);
        std::swap(rhs[col], rhs[piv]);
        for (int r = 0; r < n; r++) {
            if (r == col) continue;
            double f = M[r * n + col] / M[col * n + col];
            for (int k = col; k < n; k++) M[r * n + k] -= f * M[col * n + k];
            rhs[r] -= f * rhs[col];
        }
    }
    cvec y;
    for (int i = 0; i < 6; i++)
        y[i] = {rhs[idx_re(i)] / M[idx_re(i) * n + idx_re(i)],
                rhs[idx_im(i)] / M[idx_im(i) * n + idx_im(i)]};
    return y;
}

}  // namespace

double cat_linearized_ode_check(const CatReadoutParams& p, double duration, double step) {
    CatSteadyState ss = cat_readout_steady_state(p);  // validates nu < 1
    (void)ss;
    double max_rate = std::max({2.0 * p.g2ph * p.alpha, p.gamma_b, p.gz * p.alpha});
    if (step > 0.1 / max_rate)
        throw std::invalid_argument("step must resolve the fastest rate (<= 0.1/max rate)");

    cvec y{};
    auto rk4 = [&](const cvec& s) {
        cvec k1 = derivative(p, s);
        cvec t2;
        for (int i = 0; i < 6; i++) t2[i] = s[i] + 0.5 * step * k1[i];
        cvec k2 = derivative(p, t2);
        cvec t3;
        for (int i = 0; i < 6; i++) t3[i] = s[i] + 0.5 * step * k2[i];
        cvec k3 = derivative(p, t3);
        cvec t4;
        for (int i = 0; i < 6; i++) t4[i] = s[i] + step * k3[i];
        cvec k4 = derivative(p, t4);
        cvec out;
        for (int i = 0; i < 6; i++)
            out[i] = s[i] + step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        return out;
    };
    uint64_t steps = uint64_t(duration / step);
    for (uint64_t i = 0; i < steps; i++) {
        y = rk4(y);
        double mag = 0;
        for (auto& v : y) mag = std::max(mag, std::abs(v));
        if (!std::isfinite(mag) || mag > 1e12) throw std::runtime_error("ODE diverged");
    }

    cvec ref = fixed_point(p);
    double scale = 0;
    for (auto& v : ref) scale = std::max(scale, std::abs(v));
    double dev = 0;
    for (int i = 0; i < 6; i++) dev = std::max(dev, std::abs(y[i] - ref[i]));
    return scale > 0 ? dev / scale : dev;
}

}  // namespace biasq
