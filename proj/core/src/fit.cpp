#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "biasq/analysis.hpp"

namespace biasq {

namespace {

struct PlusCtx {
    const std::vector<XzzxPoint>* pts;
    bool per_eta;  // fit a single threshold instead of the eta curve
};

double plus_obj(const std::vector<double>& x, const void* vctx) {
    const auto& ctx = *static_cast<const PlusCtx*>(vctx);
    double acc = 0, wsum = 0;
    for (const auto& p : *ctx.pts) {
        double pth = ctx.per_eta ? x[1] : eval_pth_eta(x[1], x[2], x[3], p.eta);
        if (pth <= 1e-6) return 1e12;
        double model = std::log(x[0]) + std::log(double(p.dx)) +
                       (double(p.dz) + 1) / 2 * std::log(p.pz / pth);
        double r = std::log(p.ler) - model;
        acc += p.weight * r * r;
        wsum += p.weight;
    }
    return acc / std::max(wsum, 1e-12);
}

struct ZeroCtx {
    const std::vector<XzzxPoint>* pts;
    bool constrained;
};

double zero_obj(const std::vector<double>& x, const void* vctx) {
    const auto& ctx = *static_cast<const ZeroCtx*>(vctx);
    double acc = 0, wsum = 0;
    for (const auto& p : *ctx.pts) {
        double beta = ctx.constrained ? 1.0 : x[2];
        double alpha = ctx.constrained ? 1.0 : x[3];
        double denom = std::pow(p.eta, beta) * x[1];
        double model = std::log(x[0]) + std::log(double(p.dz)) +
                       alpha * (double(p.dx) + 1) / 2 * std::log(p.pz / denom);
        double r = std::log(p.ler) - model;
        acc += p.weight * r * r;
        wsum += p.weight;
    }
    return acc / std::max(wsum, 1e-12);
}

struct ScCtx {
    const std::vector<ScPoint>* pts;
};

double sc_obj(const std::vector<double>& x, const void* vctx) {
    const auto& ctx = *static_cast<const ScCtx*>(vctx);
    double acc = 0, wsum = 0;
    for (const auto& p : *ctx.pts) {
        double model = std::log(x[0]) + (double(p.d) + 1) / 2 * std::log(p.pz / x[1]);
        double r = std::log(p.ler) - model;
        acc += p.weight * r * r;
        wsum += p.weight;
    }
    return acc / std::max(wsum, 1e-12);
}

struct EtaCtx {
    const std::vector<std::pair<double, double>>* pts;
};

double eta_obj(const std::vector<double>& x, const void* vctx) {
    const auto& ctx = *static_cast<const EtaCtx*>(vctx);
    double acc = 0;
    for (auto [eta, pth] : *ctx.pts) {
        double model = eval_pth_eta(x[0], x[1], x[2], eta);
        if (model <= 0) return 1e12;
        double r = std::log(pth) - std::log(model);
        acc += r * r;
    }
    return acc / double(ctx.pts->size());
}

// Weighted least squares line y = a + b x.
std::pair<double, double> wls(const std::vector<double>& xs, const std::vector<double>& ys,
                              const std::vector<double>& ws) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); i++) {
        sw += ws[i];
        sx += ws[i] * xs[i];
        sy += ws[i] * ys[i];
        sxx += ws[i] * xs[i] * xs[i];
        sxy += ws[i] * xs[i] * ys[i];
    }
    double denom = sw * sxx - sx * sx;
    if (std::abs(denom) < 1e-30) throw std::runtime_error("degenerate regression");
    double b = (sw * sxy - sx * sy) / denom;
    double a = (sy - b * sx) / sw;
    return {a, b};
}

std::vector<XzzxPoint> filter_points(const std::vector<XzzxPoint>& pts) {
    std::vector<XzzxPoint> out;
    for (const auto& p : pts)
        if (p.errors >= 1 && p.ler > 0) out.push_back(p);
    return out;
}

}  // namespace

FitResult fit_ansatz_plus(const std::vector<XzzxPoint>& points) {
    auto pts = filter_points(points);
    if (pts.size() < 6) throw std::runtime_error("fit_ansatz_plus needs >= 6 points with errors");
    bool single_eta = true;
    for (const auto& p : pts) single_eta &= (p.eta == pts[0].eta);
    if (single_eta) return fit_ansatz_plus_per_eta(points);

    PlusCtx ctx{&pts, false};
    std::vector<std::pair<double, double>> bounds = {
        {1e-4, 10.0}, {1e-3, 0.2}, {0.01, 5.0}, {0.05, 5.0}};
    double best = 0;
    auto x = nelder_mead_restarts(bounds, {0.05, 0.0125, 0.6, 0.4}, 20, 4000, 12345,
                                  plus_obj, &ctx, &best);
    FitResult fr;
    fr.model = FitModel::AnsatzPlus;
    fr.params = {{"A", x[0]}, {"p_inf", x[1]}, {"C", x[2]}, {"gamma", x[3]}};
    fr.residual = best;
    fr.points_used = uint32_t(pts.size());
    return fr;
}

FitResult fit_ansatz_plus_per_eta(const std::vector<XzzxPoint>& points) {
    auto pts = filter_points(points);
    if (pts.size() < 2) throw std::runtime_error("per-eta fit needs >= 2 points");
    PlusCtx ctx{&pts, true};
    std::vector<std::pair<double, double>> bounds = {{1e-4, 10.0}, {1e-3, 0.2}};
    double best = 0;
    auto x = nelder_mead_restarts(bounds, {0.05, 0.0125}, 20, 3000, 999, plus_obj, &ctx, &best);
    FitResult fr;
    fr.model = FitModel::AnsatzPlus;
    fr.params = {{"A", x[0]}, {"p_th", x[1]}};
    fr.residual = best;
    fr.points_used = uint32_t(pts.size());
    return fr;
}

FitResult fit_ansatz_zero(const std::vector<XzzxPoint>& points, bool constrain_theory) {
    auto pts = filter_points(points);
    if (pts.size() < 6) throw std::runtime_error("fit_ansatz_zero needs >= 6 points with errors");
    ZeroCtx ctx{&pts, constrain_theory};
    std::vector<std::pair<double, double>> bounds = {
        {1e-4, 10.0}, {1e-4, 0.2}, {0.05, 2.0}, {0.3, 3.0}};
    double best = 0;
    auto x = nelder_mead_restarts(bounds, {0.04, 5e-3, 0.7, 1.2}, 20, 4000, 777,
                                  zero_obj, &ctx, &best);
    FitResult fr;
    fr.model = FitModel::AnsatzZero;
    fr.params = {{"Aprime", x[0]},
                 {"p_xth", x[1]},
                 {"beta", constrain_theory ? 1.0 : x[2]},
                 {"alpha", constrain_theory ? 1.0 : x[3]}};
    fr.residual = best;
    fr.points_used = uint32_t(pts.size());
    return fr;
}

FitResult fit_ansatz_zero_per_eta(const std::vector<XzzxPoint>& points) {
    auto pts = filter_points(points);
    if (pts.size() < 4) throw std::runtime_error("per-eta zero fit needs >= 4 points");
    struct Ctx {
        const std::vector<XzzxPoint>* pts;
    } ctx{&pts};
    auto obj = [](const std::vector<double>& x, const void* vctx) {
        const auto& c = *static_cast<const Ctx*>(vctx);
        double acc = 0, wsum = 0;
        for (const auto& p : *c.pts) {
            double model = std::log(x[0]) + std::log(double(p.dz)) +
                           x[2] * (double(p.dx) + 1) / 2 * std::log(p.pz / x[1]);
            double r = std::log(p.ler) - model;
            acc += p.weight * r * r;
            wsum += p.weight;
        }
        return acc / std::max(wsum, 1e-12);
    };
    std::vector<std::pair<double, double>> bounds = {{1e-4, 10.0}, {1e-3, 10.0}, {0.3, 3.0}};
    double best = 0;
    auto x = nelder_mead_restarts(bounds, {0.04, 0.5, 1.2}, 20, 3000, 555, obj, &ctx, &best);
    FitResult fr;
    fr.model = FitModel::AnsatzZero;
    fr.params = {{"Aprime", x[0]}, {"p_xth", x[1]}, {"beta", 0.0}, {"alpha", x[2]}};
    fr.residual = best;
    fr.points_used = uint32_t(pts.size());
    return fr;
}

FitResult fit_ansatz_sc(const std::vector<ScPoint>& points) {
    std::vector<ScPoint> pts;
    for (const auto& p : points)
        if (p.errors >= 1 && p.ler > 0) pts.push_back(p);
    if (pts.size() < 4) throw std::runtime_error("fit_ansatz_sc needs >= 4 points");
    ScCtx ctx{&pts};
    std::vector<std::pair<double, double>> bounds = {{1e-4, 10.0}, {5e-4, 0.1}};
    double best = 0;
    auto x = nelder_mead_restarts(bounds, {0.04, 5e-3}, 20, 3000, 4242, sc_obj, &ctx, &best);
    FitResult fr;
    fr.model = FitModel::AnsatzSC;
    fr.params = {{"A", x[0]}, {"p_th", x[1]}};
    fr.residual = best;
    fr.points_used = uint32_t(pts.size());
    return fr;
}

FitResult fit_repcode_lambda(const std::vector<RepPoint>& points) {
    // Group by pz.
    std::vector<double> pzs;
    for (const auto& p : points)
        if (std::find(pzs.begin(), pzs.end(), p.pz) == pzs.end()) pzs.push_back(p.pz);
    std::sort(pzs.begin(), pzs.end());

    FitResult fr;
    fr.model = FitModel::RepcodeLambda;
    std::vector<double> ln_pz, ln_lambda, wl;
    uint32_t used = 0;
    for (size_t pzi = 0; pzi < pzs.size(); pzi++) {
        double pz = pzs[pzi];
        std::vector<double> xs, ys, ws;
        std::vector<std::pair<uint32_t, double>> series;
        for (const auto& p : points) {
            if (p.pz != pz || p.errors < 1 || p.ler_cycle <= 0) continue;
            xs.push_back(double(p.d));
            ys.push_back(std::log(p.ler_cycle));
            ws.push_back(p.weight);
            series.push_back({p.d, p.ler_cycle});
        }
        if (xs.size() < 3) continue;
        std::sort(series.begin(), series.end());
        for (size_t i = 0; i + 1 < series.size(); i++) {
            if (series[i + 1].second > series[i].second * 1.25) {
                fr.warnings.push_back("non-monotone ler vs d at pz=" + std::to_string(pz));
                break;
            }
        }
        auto [a, b] = wls(xs, ys, ws);
        double lambda = std::exp(-2.0 * b);
        double A = std::exp(a);
        fr.params["lambda_" + std::to_string(pzi)] = lambda;
        fr.params["A_" + std::to_string(pzi)] = A;
        fr.params["pz_" + std::to_string(pzi)] = pz;
        used += uint32_t(xs.size());
        if (lambda > 0) {
            ln_pz.push_back(std::log(pz));
            ln_lambda.push_back(std::log(lambda));
            wl.push_back(1.0);
        }
    }
    if (ln_pz.size() < 2) throw std::runtime_error("fit_repcode_lambda needs >= 2 pz values");
    auto [c0, c1] = wls(ln_pz, ln_lambda, wl);
    // Lambda = (p_th / pz)^k: ln Lambda = c0 + c1 ln pz with c1 = -k.
    fr.params["slope"] = c1;
    fr.params["p_th_eff"] = std::exp(-c0 / c1);
    fr.residual = 0;
    fr.points_used = used;
    return fr;
}

FitResult fit_pth_eta(const std::vector<std::pair<double, double>>& eta_pth) {
    if (eta_pth.size() < 3) throw std::runtime_error("fit_pth_eta needs >= 3 points");
    EtaCtx ctx{&eta_pth};
    std::vector<std::pair<double, double>> bounds = {{1e-3, 0.2}, {0.01, 5.0}, {0.05, 5.0}};
    double best = 0;
    auto x = nelder_mead_restarts(bounds, {0.0125, 0.6, 0.4}, 20, 3000, 31337,
                                  eta_obj, &ctx, &best);
    FitResult fr;
    fr.model = FitModel::PthEta;
    fr.params = {{"p_inf", x[0]}, {"C", x[1]}, {"gamma", x[2]}};
    fr.residual = best;
    fr.points_used = uint32_t(eta_pth.size());
    return fr;
}

}  // namespace biasq
