#include <cmath>

#include "doctest.h"

#include "biasq/analysis.hpp"

using namespace biasq;

TEST_CASE("per-cycle conversion") {
    CHECK(per_cycle(0.0, 7) == 0.0);
    CHECK(per_cycle(0.37, 1) == doctest::Approx(0.37));
    CHECK(per_cycle(0.19, 2) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK_THROWS(per_cycle(1.0, 3));
    // Exact inverse of p_shot = 1 - (1-p_cycle)^rounds.
    for (double pc : {1e-4, 3e-3, 0.05}) {
        for (uint32_t rounds : {1u, 5u, 12u}) {
            double pshot = 1 - std::pow(1 - pc, rounds);
            CHECK(per_cycle(pshot, rounds) == doctest::Approx(pc).epsilon(1e-10));
        }
    }
}

namespace {
// Independent binomial-tail oracle (Clopper-Pearson by bisection).
double binom_tail_ge(uint64_t n, uint64_t k, double p) {
    // P(X >= k)
    double acc = 0;
    for (uint64_t i = 0; i < k; i++) {
        double logterm = std::lgamma(double(n + 1)) - std::lgamma(double(i + 1)) -
                         std::lgamma(double(n - i + 1)) + double(i) * std::log(p) +
                         double(n - i) * std::log1p(-p);
        acc += std::exp(logterm);
    }
    return 1.0 - acc;
}
double cp_low(uint64_t n, uint64_t k) {
    double lo = 0, hi = double(k) / double(n);
    for (int it = 0; it < 200; it++) {
        double mid = (lo + hi) / 2;
        if (binom_tail_ge(n, k, mid) < 0.025) lo = mid;
        else hi = mid;
    }
    return lo;
}
double cp_high(uint64_t n, uint64_t k) {
    double lo = double(k) / double(n), hi = 1;
    for (int it = 0; it < 200; it++) {
        double mid = (lo + hi) / 2;
        // P(X <= k) = 1 - P(X >= k+1)
        if (1.0 - binom_tail_ge(n, k + 1, mid) < 0.025) hi = mid;
        else lo = mid;
    }
    return hi;
}
}  // namespace

TEST_CASE("confidence bounds") {
    auto [lo0, hi0] = ci_bounds(1000000, 0);
    CHECK(lo0 == 0.0);
    CHECK(hi0 == doctest::Approx(3e-6));

    auto [lo5, hi5] = ci_bounds(100, 50);
    CHECK(lo5 < 0.5);
    CHECK(hi5 > 0.5);

    // Wilson interval tracks the exact binomial tail interval closely.
    auto [wlo, whi] = ci_bounds(10000, 10);
    double clo = cp_low(10000, 10), chi = cp_high(10000, 10);
    CHECK(wlo == doctest::Approx(clo).epsilon(0.25));
    CHECK(whi == doctest::Approx(chi).epsilon(0.25));
    CHECK(wlo < 10.0 / 10000);
    CHECK(whi > 10.0 / 10000);
    CHECK_THROWS(ci_bounds(0, 0));
}

TEST_CASE("neff thresholds") {
    CHECK(neff_threshold(4) == doctest::Approx(0.025));
    CHECK(neff_threshold(3) == doctest::Approx(0.1 / 3));
    CHECK(neff_threshold(1) == doctest::Approx(0.10));
}

namespace {
std::vector<XzzxPoint> synth_plus(double A, double pinf, double C, double gamma) {
    std::vector<XzzxPoint> pts;
    for (uint32_t dx : {3u, 5u}) {
        for (uint32_t dz = 7; dz <= 17; dz += 2) {
            for (double pz : {1e-3, 3e-3, 5e-3}) {
                for (double eta : {10.0, 30.0, 100.0, 300.0, 1000.0}) {
                    double pth = eval_pth_eta(pinf, C, gamma, eta);
                    double ler = A * dx * std::pow(pz / pth, (dz + 1.0) / 2);
                    if (ler < 1e-14 || ler > 0.4) continue;
                    pts.push_back({dx, dz, pz, eta, ler, 1.0, 100});
                }
            }
        }
    }
    return pts;
}
}  // namespace

TEST_CASE("ansatz plus fit recovers the generating parameters within 1%") {
    auto pts = synth_plus(0.042, 1.25e-2, 0.623, 0.429);
    auto fit = fit_ansatz_plus(pts);
    CHECK(fit.params.at("A") == doctest::Approx(0.042).epsilon(0.01));
    CHECK(fit.params.at("p_inf") == doctest::Approx(1.25e-2).epsilon(0.01));
    CHECK(fit.params.at("C") == doctest::Approx(0.623).epsilon(0.01));
    CHECK(fit.params.at("gamma") == doctest::Approx(0.429).epsilon(0.01));

    // Evaluation check quoted against the fitted curve.
    FitResult paper;
    paper.model = FitModel::AnsatzPlus;
    paper.params = {{"A", 0.042}, {"p_inf", 1.25e-2}, {"C", 0.623}, {"gamma", 0.429}};
    double p311 = eval_ansatz_plus(paper, 3, 11, 1e-3, 1e3);
    CHECK(p311 < 1e-7);
    CHECK(p311 > 1e-9);
}

TEST_CASE("single-eta data falls back to the per-eta threshold mode") {
    std::vector<XzzxPoint> pts;
    for (uint32_t dz = 7; dz <= 17; dz += 2)
        for (double pz : {1e-3, 3e-3, 5e-3}) {
            double ler = 0.05 * 3 * std::pow(pz / 0.0121, (dz + 1.0) / 2);
            if (ler > 1e-14) pts.push_back({3, dz, pz, 1000.0, ler, 1.0, 100});
        }
    auto fit = fit_ansatz_plus(pts);
    CHECK(fit.params.count("p_th") == 1);
    CHECK(fit.params.at("p_th") == doctest::Approx(0.0121).epsilon(0.02));
}

TEST_CASE("ansatz zero fit recovers parameters and supports the theory mode") {
    std::vector<XzzxPoint> pts;
    double A = 0.039, pxth = 5.3e-3, beta = 0.685, alpha = 1.264;
    for (uint32_t dx : {3u, 5u})
        for (uint32_t dz = 7; dz <= 17; dz += 2)
            for (double pz : {1e-3, 3e-3, 5e-3})
                for (double eta : {10.0, 100.0, 1000.0}) {
                    double ler = A * dz * std::pow(pz / (std::pow(eta, beta) * pxth),
                                                   alpha * (dx + 1.0) / 2);
                    if (ler < 1e-14 || ler > 0.4) continue;
                    pts.push_back({dx, dz, pz, eta, ler, 1.0, 100});
                }
    auto fit = fit_ansatz_zero(pts);
    CHECK(fit.params.at("Aprime") == doctest::Approx(A).epsilon(0.01));
    CHECK(fit.params.at("p_xth") == doctest::Approx(pxth).epsilon(0.01));
    CHECK(fit.params.at("beta") == doctest::Approx(beta).epsilon(0.01));
    CHECK(fit.params.at("alpha") == doctest::Approx(alpha).epsilon(0.01));

    auto constrained = fit_ansatz_zero(pts, true);
    CHECK(constrained.params.at("alpha") == 1.0);
    CHECK(constrained.params.at("beta") == 1.0);

    // Idempotent under duplication.
    auto doubled = pts;
    doubled.insert(doubled.end(), pts.begin(), pts.end());
    auto fit2 = fit_ansatz_zero(doubled);
    CHECK(fit2.params.at("p_xth") == doctest::Approx(fit.params.at("p_xth")).epsilon(1e-6));
}

TEST_CASE("fit invariance under reordering and weight rescaling") {
    auto pts = synth_plus(0.042, 1.25e-2, 0.623, 0.429);
    auto base = fit_ansatz_plus(pts);
    std::reverse(pts.begin(), pts.end());
    auto rev = fit_ansatz_plus(pts);
    CHECK(rev.params.at("p_inf") == doctest::Approx(base.params.at("p_inf")).epsilon(1e-9));
    for (auto& p : pts) p.weight *= 7.5;
    auto scaled = fit_ansatz_plus(pts);
    CHECK(scaled.params.at("p_inf") == doctest::Approx(base.params.at("p_inf")).epsilon(1e-9));
}

TEST_CASE("repcode lambda fit: exact synthetic recovery and threshold") {
    std::vector<RepPoint> pts;
    // Lambda(pz) = pth/pz with pth = 0.023; A = 0.11.
    for (double pz : {3e-3, 5e-3, 7e-3, 9e-3, 11e-3}) {
        double lambda = 0.023 / pz;
        for (uint32_t d = 3; d <= 15; d += 2)
            pts.push_back({d, pz, 0.11 * std::pow(lambda, -double(d) / 2), 1.0, 1000});
    }
    auto fit = fit_repcode_lambda(pts);
    CHECK(fit.params.at("lambda_0") == doctest::Approx(0.023 / 3e-3).epsilon(0.005));
    CHECK(fit.params.at("p_th_eff") == doctest::Approx(0.023).epsilon(0.005));
    CHECK(fit.warnings.empty());

    // Non-monotone series attaches a warning.
    auto noisy = pts;
    noisy[1].ler_cycle *= 40.0;
    auto fit2 = fit_repcode_lambda(noisy);
    CHECK(!fit2.warnings.empty());
}

TEST_CASE("pth-eta parametrization fit") {
    std::vector<std::pair<double, double>> pts;
    for (double eta : {10., 30., 100., 300., 1000., 3000.})
        pts.push_back({eta, eval_pth_eta(1.25e-2, 0.623, 0.429, eta)});
    auto fit = fit_pth_eta(pts);
    CHECK(fit.params.at("p_inf") == doctest::Approx(1.25e-2).epsilon(0.01));
    CHECK(fit.params.at("C") == doctest::Approx(0.623).epsilon(0.02));
    CHECK(fit.params.at("gamma") == doctest::Approx(0.429).epsilon(0.02));
}

TEST_CASE("noisy synthetic round trip recovers within 10%") {
    // 5% lognormal noise on 30 points.
    uint64_t state = 12345;
    auto rnd = [&]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return double(state >> 11) * 0x1.0p-53;
    };
    auto pts = synth_plus(0.042, 1.25e-2, 0.623, 0.429);
    std::vector<XzzxPoint> sub;
    for (size_t i = 0; i < pts.size() && sub.size() < 30; i += pts.size() / 30)
        sub.push_back(pts[i]);
    for (auto& p : sub) {
        double g = std::sqrt(-2 * std::log(rnd() + 1e-12)) * std::cos(2 * M_PI * rnd());
        p.ler *= std::exp(0.05 * g);
    }
    auto fit = fit_ansatz_plus(sub);
    CHECK(fit.params.at("A") == doctest::Approx(0.042).epsilon(0.10));
    CHECK(fit.params.at("p_inf") == doctest::Approx(1.25e-2).epsilon(0.10));
}
