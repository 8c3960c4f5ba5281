#include "biasq/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace biasq {

double per_cycle(double ler_shot, uint32_t rounds) {
    if (ler_shot < 0 || ler_shot >= 1)
        throw std::domain_error("per-shot rate must be in [0, 1)");
    if (rounds < 1) throw std::domain_error("rounds must be >= 1");
    if (ler_shot == 0) return 0;
    return 1.0 - std::pow(1.0 - ler_shot, 1.0 / double(rounds));
}

std::pair<double, double> ci_bounds(uint64_t shots, uint64_t errors) {
    if (shots == 0) throw std::domain_error("ci_bounds needs shots > 0");
    if (errors > shots) throw std::domain_error("errors exceed shots");
    if (errors == 0) return {0.0, 3.0 / double(shots)};
    const double z = 1.959963984540054;
    double n = double(shots), p = double(errors) / n;
    double z2n = z * z / n;
    double center = (p + z2n / 2) / (1 + z2n);
    double half = z * std::sqrt(p * (1 - p) / n + z2n / (4 * n)) / (1 + z2n);
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

ShotStats make_stats(uint64_t shots, uint64_t errors, uint32_t rounds) {
    ShotStats st;
    st.shots = shots;
    st.errors = errors;
    st.rounds = rounds;
    st.ler_shot = shots ? double(errors) / double(shots) : 0.0;
    st.ler_cycle = st.ler_shot < 1.0 ? per_cycle(st.ler_shot, rounds) : 1.0;
    auto [lo, hi] = ci_bounds(shots, errors);
    st.ci_low = lo;
    st.ci_high = hi;
    return st;
}

double neff_threshold(uint32_t n_eff) {
    if (n_eff < 1) throw std::domain_error("n_eff must be >= 1");
    return 0.10 / double(n_eff);
}

double eval_pth_eta(double p_inf, double C, double gamma, double eta) {
    return p_inf * (1.0 - C * std::pow(eta, -gamma));
}

double eval_ansatz_plus(const FitResult& fit, uint32_t dx, uint32_t dz, double pz, double eta) {
    double pth;
    if (fit.params.count("p_inf")) {
        pth = eval_pth_eta(fit.params.at("p_inf"), fit.params.at("C"), fit.params.at("gamma"), eta);
    } else {
        pth = fit.params.at("p_th");
    }
    return fit.params.at("A") * double(dx) * std::pow(pz / pth, (double(dz) + 1) / 2);
}

double eval_ansatz_zero(const FitResult& fit, uint32_t dx, uint32_t dz, double pz, double eta) {
    double denom = std::pow(eta, fit.params.at("beta")) * fit.params.at("p_xth");
    double expo = fit.params.at("alpha") * (double(dx) + 1) / 2;
    return fit.params.at("Aprime") * double(dz) * std::pow(pz / denom, expo);
}

double eval_ansatz_sc(const FitResult& fit, uint32_t d, double pz, double eta) {
    (void)eta;
    double px_part = fit.params.at("A_x") *
                     std::pow(pz / fit.params.at("p_th_x"), (double(d) + 1) / 2);
    double pz_part = fit.params.at("A_z") *
                     std::pow(pz / fit.params.at("p_th_z"), (double(d) + 1) / 2);
    return px_part + pz_part;
}

namespace {

struct Simplex {
    // Nelder-Mead on a box; out-of-bounds points are clamped with a penalty.
    static double eval(const std::vector<double>& x,
                       const std::vector<std::pair<double, double>>& bounds,
                       double (*f)(const std::vector<double>&, const void*), const void* ctx) {
        std::vector<double> c = x;
        double penalty = 0;
        for (size_t i = 0; i < c.size(); i++) {
            if (c[i] < bounds[i].first) {
                penalty += (bounds[i].first - c[i]) / (bounds[i].second - bounds[i].first);
                c[i] = bounds[i].first;
            } else if (c[i] > bounds[i].second) {
                penalty += (c[i] - bounds[i].second) / (bounds[i].second - bounds[i].first);
                c[i] = bounds[i].second;
            }
        }
        return f(c, ctx) * (1 + penalty) + penalty;
    }
};

uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

std::vector<double> nelder_mead_restarts(
    const std::vector<std::pair<double, double>>& bounds, const std::vector<double>& init,
    int restarts, int max_iter, uint64_t seed,
    double (*f)(const std::vector<double>&, const void*), const void* ctx, double* best_value) {
    size_t n = bounds.size();
    std::vector<double> best = init;
    double best_f = Simplex::eval(init, bounds, f, ctx);

    uint64_t rng = seed;
    auto unit = [&]() {
        rng = mix64(rng);
        return (rng >> 11) * 0x1.0p-53;
    };

    for (int r = 0; r <= restarts; r++) {
        std::vector<double> start(n);
        if (r == 0) {
            start = init;
        } else {
            for (size_t i = 0; i < n; i++)
                start[i] = bounds[i].first + unit() * (bounds[i].second - bounds[i].first);
        }
        // Initial simplex spanning ~5% of the box per direction.
        std::vector<std::vector<double>> pts(n + 1, start);
        std::vector<double> fv(n + 1);
        for (size_t i = 0; i < n; i++) {
            double span = 0.05 * (bounds[i].second - bounds[i].first);
            pts[i + 1][i] = std::min(bounds[i].second, start[i] + span);
            if (pts[i + 1][i] == start[i]) pts[i + 1][i] = start[i] - span;
        }
        for (size_t i = 0; i <= n; i++) fv[i] = Simplex::eval(pts[i], bounds, f, ctx);

        for (int it = 0; it < max_iter; it++) {
            size_t hi = 0, lo = 0, second = 0;
            for (size_t i = 1; i <= n; i++) {
                if (fv[i] < fv[lo]) lo = i;
                if (fv[i] > fv[hi]) hi = i;
            }
            second = lo;
            for (size_t i = 0; i <= n; i++)
                if (i != hi && fv[i] > fv[second]) second = i;
            if (std::abs(fv[hi] - fv[lo]) < 1e-12 * (1 + std::abs(fv[lo]))) break;

            std::vector<double> centroid(n, 0);
            for (size_t i = 0; i <= n; i++) {
                if (i == hi) continue;
                for (size_t k = 0; k < n; k++) centroid[k] += pts[i][k] / double(n);
            }
            auto blend = [&](double t) {
                std::vector<double> p(n);
                for (size_t k = 0; k < n; k++) p[k] = centroid[k] + t * (pts[hi][k] - centroid[k]);
                return p;
            };
            auto refl = blend(-1.0);
            double fr = Simplex::eval(refl, bounds, f, ctx);
            if (fr < fv[lo]) {
                auto expa = blend(-2.0);
                double fe = Simplex::eval(expa, bounds, f, ctx);
                if (fe < fr) { pts[hi] = expa; fv[hi] = fe; }
                else { pts[hi] = refl; fv[hi] = fr; }
            } else if (fr < fv[second]) {
                pts[hi] = refl;
                fv[hi] = fr;
            } else {
                auto contr = blend(0.5);
                double fc = Simplex::eval(contr, bounds, f, ctx);
                if (fc < fv[hi]) { pts[hi] = contr; fv[hi] = fc; }
                else {
                    for (size_t i = 0; i <= n; i++) {
                        if (i == lo) continue;
                        for (size_t k = 0; k < n; k++)
                            pts[i][k] = pts[lo][k] + 0.5 * (pts[i][k] - pts[lo][k]);
                        fv[i] = Simplex::eval(pts[i], bounds, f, ctx);
                    }
                }
            }
        }
        size_t lo = 0;
        for (size_t i = 1; i <= n; i++)
            if (fv[i] < fv[lo]) lo = i;
        if (fv[lo] < best_f) {
            best_f = fv[lo];
            best = pts[lo];
            for (size_t i = 0; i < n; i++)
                best[i] = std::clamp(best[i], bounds[i].first, bounds[i].second);
        }
    }
    if (best_value) *best_value = best_f;
    return best;
}

}  // namespace biasq
