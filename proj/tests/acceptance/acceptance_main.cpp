// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Desk-scale Monte-Carlo budgets; every tolerance is pinned here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "biasq/analysis.hpp"
#include "biasq/codegen.hpp"
#include "biasq/decoder.hpp"
#include "biasq/dem.hpp"
#include "biasq/graph.hpp"
#include "biasq/overhead.hpp"
#include "biasq/physics.hpp"
#include "biasq/sweep.hpp"
#include "choi.hpp"
#include "statevector.hpp"

using namespace biasq;

namespace {

int g_failures = 0;
std::chrono::steady_clock::time_point g_t0;

void report(int criterion, bool pass, const std::string& detail) {
    double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - g_t0).count();
    std::printf("CRITERION %2d %s  [%6.0f s]  %s\n", criterion, pass ? "PASS" : "FAIL", t,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) g_failures++;
}

struct RepFitOutcome {
    double pth;
    std::vector<RepPoint> points;
    double a_at_low_pz = 0.1;
};

RepFitOutcome rep_threshold(CodeFamily fam, uint64_t max_shots, uint64_t max_errors,
                            uint64_t seed, int threads) {
    std::vector<double> pzs = {3e-3, 5e-3, 7e-3, 9e-3, 11e-3};
    std::vector<uint32_t> ds = {3, 5, 7, 9, 11, 13, 15};
    RepFitOutcome out;
    for (auto& task : rep_grid(fam, ds, pzs, 1e-9)) {
        auto gen = build_circuit(task.spec, task.noise);
        auto dem = extract_dem(gen.circuit, gen.frame_observables, false);
        auto graph = build_matching_graph(dem);
        MwpmDecoder dec(graph);
        // Probe first: points that cannot reach the 50-error fit eligibility
        // within budget are abandoned early.
        uint64_t probe = std::min<uint64_t>(max_shots, 200000);
        auto st = sample_until(gen, dec, probe, max_errors, seed + task.spec.d, threads);
        if (st.errors >= 10 && st.stopped_by == "max_shots" && probe < max_shots)
            st = sample_until(gen, dec, max_shots, max_errors, seed + task.spec.d, threads);
        if (st.errors >= 50) {
            double lw = std::log(st.ci_high / st.ci_low) / 2;
            out.points.push_back(
                {task.spec.d, task.noise.pz, st.ler_cycle, 1.0 / (lw * lw), st.errors});
        }
    }
    // Asymptotic slope: the d = 3 boundary points sit visibly off the
    // exponential at desk scale; the paper's fit range extends to d = 25
    // where they carry no weight.
    std::vector<RepPoint> pts;
    for (auto& p : out.points)
        if (p.d >= 5) pts.push_back(p);
    auto fit = fit_repcode_lambda(pts);
    out.pth = fit.params.at("p_th_eff");
    if (fit.params.count("A_0")) out.a_at_low_pz = fit.params.at("A_0");
    return out;
}

}  // namespace

static bool want(int crit, int argc, char** argv) {
    if (argc < 2) return true;
    for (int i = 1; i < argc; i++)
        if (std::atoi(argv[i]) == crit) return true;
    return false;
}

int main(int argc, char** argv) {
    g_t0 = std::chrono::steady_clock::now();
    const int threads = 2;
    const uint64_t kShotCap = 1000000;
    const uint64_t kErrorCap = 5000;

    double pth_alt = 0, pth_cnot = 0, pth_sim = 0;
    RepFitOutcome alt_fit;

    // --- 1: repetition-code thresholds ---------------------------------
    if (want(1, argc, argv) || want(2, argc, argv)) {
        alt_fit = rep_threshold(CodeFamily::RepMZ4Alternated, kShotCap, kErrorCap, 101, threads);
        pth_alt = alt_fit.pth;
        pth_cnot =
            rep_threshold(CodeFamily::RepBPCNOT, kShotCap, kErrorCap, 202, threads).pth;
        pth_sim =
            rep_threshold(CodeFamily::RepMZ4Simultaneous, kShotCap, kErrorCap, 303, threads).pth;
        bool ok_alt = std::abs(pth_alt - 0.023) <= 0.003;
        bool ok_cnot = std::abs(pth_cnot - 0.031) <= 0.003;
        bool ok_sim = std::abs(pth_sim - 0.030) <= 0.003;
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "alternated %.2f%% (2.3+-0.3), bp-cnot %.2f%% (3.1+-0.3), "
                      "simultaneous %.2f%% (3.0+-0.3)",
                      100 * pth_alt, 100 * pth_cnot, 100 * pth_sim);
        if (want(1, argc, argv)) report(1, ok_alt && ok_cnot && ok_sim, buf);

        // --- 2: threshold ratio -----------------------------------------
        if (want(2, argc, argv)) {
            double ratio = pth_cnot / pth_alt;
            char buf2[128];
            std::snprintf(buf2, sizeof buf2, "bp-cnot/alternated = %.3f (band 1.25..1.45)",
                          ratio);
            report(2, ratio >= 1.25 && ratio <= 1.45, buf2);
        }
    }

    // --- 3 & 4: XZZX sub-threshold slope and per-eta thresholds ---------
    FitResult plus_fit_eta100, zero_fit_eta100;
    bool have_eta100 = false;
    if (want(3, argc, argv) || want(4, argc, argv) || want(6, argc, argv)) {
        struct EtaData {
            double eta;
            std::vector<XzzxPoint> pts;
        };
        std::vector<EtaData> runs = {{100.0, {}}, {1000.0, {}}};
        std::vector<double> slope_ler(3, 0);  // dz = 7, 9, 11 at eta=1e3, pz=1e-3
        std::vector<uint64_t> slope_err(3, 0);
        for (auto& run : runs) {
            for (uint32_t dz : {7u, 9u, 11u}) {
                for (double pz : {1e-3, 3e-3, 5e-3}) {
                    SweepTask t;
                    t.spec.family = CodeFamily::XZZX_MZ4;
                    t.spec.dx = 3;
                    t.spec.dz = dz;
                    t.spec.rounds = dz;
                    t.noise.pz = pz;
                    t.noise.eta = run.eta;
                    auto gen = build_circuit(t.spec, t.noise);
                    auto dem = extract_dem(gen.circuit, gen.frame_observables, false);
                    auto graph = build_matching_graph(dem);
                    MwpmDecoder dec(graph);
                    uint64_t cap = kShotCap;
                    // The slope criterion needs resolvable statistics at the
                    // deepest point; stretch the budget there.
                    if (run.eta == 1000.0 && pz == 1e-3) cap = dz >= 11 ? 20000000 : 4000000;
                    auto st = sample_until(gen, dec, cap, 3000, 400 + dz, threads);
                    if (run.eta == 1000.0 && pz == 1e-3) {
                        slope_ler[(dz - 7) / 2] = st.ler_cycle;
                        slope_err[(dz - 7) / 2] = st.errors;
                    }
                    if (st.errors >= 10) {
                        double lw = std::log(st.ci_high / st.ci_low) / 2;
                        run.pts.push_back(
                            {3, dz, pz, run.eta, st.ler_cycle, 1.0 / (lw * lw), st.errors});
                    }
                }
            }
        }
        if (want(3, argc, argv)) {
            double r1 = slope_ler[0] / std::max(slope_ler[1], 1e-15);
            double r2 = slope_ler[1] / std::max(slope_ler[2], 1e-15);
            FitResult paper_plus;
            paper_plus.model = FitModel::AnsatzPlus;
            paper_plus.params = {
                {"A", 0.042}, {"p_inf", 1.25e-2}, {"C", 0.623}, {"gamma", 0.429}};
            double predicted_311 = eval_ansatz_plus(paper_plus, 3, 11, 1e-3, 1e3);
            char buf[256];
            std::snprintf(buf, sizeof buf,
                          "per-step suppression %.1fx, %.1fx (>= 3 each; errors %llu/%llu/%llu); "
                          "ansatz p(3,11) = %.2g < 1e-7",
                          r1, r2, (unsigned long long)slope_err[0],
                          (unsigned long long)slope_err[1], (unsigned long long)slope_err[2],
                          predicted_311);
            report(3, r1 >= 3.0 && r2 >= 3.0 && predicted_311 < 1e-7, buf);
        }
        if (want(4, argc, argv) || want(6, argc, argv)) {
            bool ok = true;
            std::string detail;
            for (auto& run : runs) {
                auto fit = fit_ansatz_plus_per_eta(run.pts);
                double expect = eval_pth_eta(1.25e-2, 0.623, 0.429, run.eta);
                double diff = fit.params.at("p_th") - expect;
                ok = ok && std::abs(diff) <= 0.0015;
                char buf[128];
                std::snprintf(buf, sizeof buf, "eta=%g: %.3f%% vs %.3f%% (|diff| <= 0.15%%)  ",
                              run.eta, 100 * fit.params.at("p_th"), 100 * expect);
                detail += buf;
                if (run.eta == 100.0) {
                    plus_fit_eta100 = fit;
                    have_eta100 = true;
                }
            }
            if (want(4, argc, argv)) report(4, ok, detail);
        }
        // Zero-memory refit at eta = 100 for the criterion-6 band.
        if (want(6, argc, argv)) {
            std::vector<XzzxPoint> zpts;
            for (uint32_t dx : {3u, 5u}) {
                for (uint32_t dz : {7u, 9u}) {
                    for (double pz : {3e-3, 5e-3}) {
                        SweepTask t;
                        t.spec.family = CodeFamily::XZZX_MZ4;
                        t.spec.dx = dx;
                        t.spec.dz = dz;
                        t.spec.rounds = std::max(dx, dz);
                        t.spec.memory = MemoryBasis::ZeroMemory;
                        t.noise.pz = pz;
                        t.noise.eta = 100.0;
                        auto gen = build_circuit(t.spec, t.noise);
                        auto dem = extract_dem(gen.circuit, gen.frame_observables, false);
                        auto graph = build_matching_graph(dem);
                        MwpmDecoder dec(graph);
                        auto st = sample_until(gen, dec, kShotCap, 3000, 600 + dx + dz, threads);
                        if (st.errors >= 10) {
                            double lw = std::log(st.ci_high / st.ci_low) / 2;
                            zpts.push_back(
                                {dx, dz, pz, 100.0, st.ler_cycle, 1.0 / (lw * lw), st.errors});
                        }
                    }
                }
            }
            zero_fit_eta100 = fit_ansatz_zero_per_eta(zpts);
        }
    }

    // --- 5: footprint exactness -----------------------------------------
    if (want(5, argc, argv)) {
        NoiseParams nz;
        nz.pz = 1e-3;
        nz.eta = 1e3;
        bool ok = true;
        std::string detail;
        auto check_count = [&](CodeSpec s, uint32_t expect) {
            auto fp = footprint(s);
            auto gen = build_circuit(s, nz);
            std::vector<char> touched(gen.circuit.qubit_count, 0);
            for (auto& ins : gen.circuit.instructions)
                for (uint32_t q : ins.targets) touched[q] = 1;
            uint32_t used = 0;
            for (char c : touched) used += c;
            bool this_ok = fp.qubit_count == expect && used == expect;
            ok = ok && this_ok;
            detail += family_name(s.family) + "=" + std::to_string(used) +
                      (this_ok ? " " : "(!) ");
        };
        CodeSpec s;
        s.family = CodeFamily::XZZX_MZ4;
        s.dx = 5;
        s.dz = 15;
        s.rounds = 15;
        check_count(s, 278);
        s.family = CodeFamily::RotatedSC_DepolCX;
        s.d = 23;
        s.rounds = 2;
        check_count(s, 1057);
        s.family = CodeFamily::RepMZ4Alternated;
        s.d = 11;
        s.rounds = 2;
        nz.px_explicit = 1e-7;
        check_count(s, 22);
        s.family = CodeFamily::RepMZ4Simultaneous;
        check_count(s, 31);
        s.family = CodeFamily::RepBPCNOT;
        check_count(s, 21);
        report(5, ok, detail + "(closed forms == generated-circuit usage)");
    }

    // --- 6: overhead staircases ------------------------------------------
    if (want(6, argc, argv)) {
        FitResult paper_plus, paper_zero, paper_sc;
        paper_plus.params = {{"A", 0.042}, {"p_inf", 1.25e-2}, {"C", 0.623}, {"gamma", 0.429}};
        paper_zero.params = {
            {"Aprime", 0.039}, {"p_xth", 5.3e-3}, {"beta", 0.685}, {"alpha", 1.264}};
        paper_sc.params = {
            {"A_x", 0.042}, {"p_th_x", 0.46e-2}, {"A_z", 0.016}, {"p_th_z", 0.68e-2}};
        auto xz = optimize_xzzx(1e-9, 1e-3, 1e3, paper_plus, paper_zero);
        auto sc = optimize_rotated_sc(1e-9, 1e-3, 1e3, paper_sc);
        bool exact_ok = xz.dx == 5 && xz.dz == 15 && xz.qubits == 278 && sc.d == 23 &&
                        sc.qubits == 1057;
        double ratio = double(sc.qubits) / double(xz.qubits);

        bool band_ok = true;
        std::string band_detail;
        for (double target : {1e-7, 1e-8, 1e-9, 1e-10, 1e-11}) {
            auto x = optimize_xzzx(target, 1e-3, 1e2, plus_fit_eta100, zero_fit_eta100);
            auto r = optimize_rotated_sc(target, 1e-3, 1e2, paper_sc);
            double adv = double(r.qubits) / double(x.qubits);
            char b[64];
            std::snprintf(b, sizeof b, "%.2f ", adv);
            band_detail += b;
            band_ok = band_ok && adv >= 2.0 && adv <= 2.8;
        }
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "(5,15)/278 and d=23/1057: %s, ratio %.2f; eta=100 advantage [%s] in "
                      "[2.0, 2.8]: %s",
                      exact_ok ? "yes" : "no", ratio, band_detail.c_str(),
                      band_ok ? "yes" : "no");
        report(6, exact_ok && std::abs(ratio - 3.8) < 0.05 && band_ok, buf);
    }

    // --- 7: oracle equivalences -------------------------------------------
    if (want(7, argc, argv)) {
        // (a) gadget channel equivalence.
        double dev = 0;
        {
            auto g = gadget_cx_via_mz3();
            dev = std::max(dev, oracle::gadget_channel_deviation(g, 0, 0, true));
        }
        {
            auto g = gadget_xx_via_mz4();
            uint64_t opx = (uint64_t(1) << g.input_qubits[0]) | (uint64_t(1) << g.input_qubits[1]);
            dev = std::max(dev, oracle::gadget_channel_deviation(g, opx, 0, false));
        }
        {
            auto g = gadget_zxxz_via_mz4();
            uint64_t opx = (uint64_t(1) << g.input_qubits[1]) | (uint64_t(1) << g.input_qubits[2]);
            uint64_t opz = (uint64_t(1) << g.input_qubits[0]) | (uint64_t(1) << g.input_qubits[3]);
            dev = std::max(dev, oracle::gadget_channel_deviation(g, opx, opz, false));
        }
        for (bool redundant : {false, true}) {
            auto g = gadget_mx4_via_three_mz4(redundant);
            uint64_t opx = 0;
            for (uint32_t q : g.input_qubits) opx |= uint64_t(1) << q;
            dev = std::max(dev, oracle::gadget_channel_deviation(g, opx, 0, false));
        }
        bool gadgets_ok = dev < 1e-9;

        // (b) frame sampler vs exhaustive noise enumeration on a small
        // noisy circuit.
        bool sampler_ok = true;
        {
            Circuit c;
            c.qubit_count = 4;
            c.rx({0, 1, 2, 3});
            uint32_t s1 = c.mppz({0, 1, 2, 3});
            c.biased_pauli1({0}, 0.05, 0.03, 0.1);
            c.biased_pauli1({2}, 0.04, 0.02, 0.08);
            uint32_t s2 = c.mppz({0, 1, 2, 3});
            c.flip_result(0.07);
            c.detector_abs({s1, s2});
            c.pauli2(0, 1, {{'I', 'Z', 0.05}, {'Z', 'I', 0.04}, {'X', 'X', 0.03}});
            c.depolarize2(2, 3, 0.12);
            uint32_t s3 = c.mppz({0, 1, 2, 3});
            c.detector_abs({s2, s3});
            std::vector<uint32_t> ms;
            for (uint32_t q = 0; q < 4; q++) ms.push_back(c.mx(q));
            c.observable_abs(0, ms);

            auto infos = oracle::site_infos(c);
            std::map<uint32_t, double> exact;
            std::function<void(size_t, double, std::vector<oracle::SiteFault>&)> rec =
                [&](size_t k, double prob, std::vector<oracle::SiteFault>& faults) {
                    if (prob < 1e-15) return;
                    if (k == infos.size()) {
                        auto run = oracle::run_with_faults(c, faults);
                        uint32_t pattern = 0;
                        for (size_t i = 0; i < run.detectors.size(); i++)
                            pattern |= uint32_t(run.detectors[i]) << i;
                        pattern |= uint32_t(run.observables[0]) << run.detectors.size();
                        exact[pattern] += prob;
                        return;
                    }
                    double rest = 1;
                    for (auto [letter, p] : infos[k].terms) rest -= p;
                    rec(k + 1, prob * rest, faults);
                    for (auto [letter, p] : infos[k].terms) {
                        faults.push_back({infos[k].site, letter});
                        rec(k + 1, prob * p, faults);
                        faults.pop_back();
                    }
                };
            std::vector<oracle::SiteFault> faults;
            rec(0, 1.0, faults);
            const uint64_t shots = 100000;
            auto batch = sample(c, shots, 2718, {}, 0, threads);
            std::map<uint32_t, uint64_t> hist;
            for (uint64_t sh = 0; sh < shots; sh++) {
                uint32_t pattern = 0;
                for (uint32_t d = 0; d < batch.detector_count; d++)
                    pattern |= uint32_t(batch.detector(sh, d)) << d;
                pattern |= uint32_t(batch.observable(sh, 0)) << batch.detector_count;
                hist[pattern]++;
            }
            for (auto& [pattern, p] : exact) {
                double emp = hist.count(pattern) ? double(hist.at(pattern)) / shots : 0.0;
                double sigma = std::sqrt(std::max(p * (1 - p), 1e-12) / double(shots));
                if (std::abs(emp - p) > 3 * sigma + 2e-4) sampler_ok = false;
            }
        }

        // (c) blossom vs brute force: folded into the unit suite's 1000
        // instances; repeat a compact version here for the gate.
        bool blossom_ok = true;
        {
            uint64_t state = 0xfeedface12345ull;
            auto rnd = [&]() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                return state;
            };
            for (int trial = 0; trial < 1000 && blossom_ok; trial++) {
                uint32_t n_det = 4 + rnd() % 9;
                DetectorErrorModel dem;
                dem.detector_count = n_det;
                dem.observable_count = 1;
                for (uint32_t i = 0; i + 1 < n_det; i++)
                    dem.mechanisms.push_back(
                        {0.02 + 0.3 * double(rnd() % 1000) / 1000.0, {i, i + 1}, {}});
                for (uint32_t cidx = 0; cidx < n_det; cidx++) {
                    uint32_t a = rnd() % n_det, b = rnd() % n_det;
                    if (a != b)
                        dem.mechanisms.push_back({0.02 + 0.3 * double(rnd() % 1000) / 1000.0,
                                                  {std::min(a, b), std::max(a, b)},
                                                  {}});
                }
                dem.mechanisms.push_back({0.1, {0}, {}});
                dem.mechanisms.push_back({0.1, {n_det - 1}, {}});
                auto graph = build_matching_graph(dem);
                MwpmDecoder dec(graph);
                std::vector<uint32_t> defects;
                for (uint32_t d = 0; d < n_det; d++)
                    if (rnd() % 100 < 45) defects.push_back(d);
                // Subset-DP oracle.
                const int64_t INF = INT64_MAX / 8;
                size_t n = n_det;
                std::vector<int64_t> dist(n * n, INF), bfull(n, INF), bdry(n, INF);
                for (size_t i = 0; i < n; i++) dist[i * n + i] = 0;
                for (auto& e : graph.edges) {
                    if (e.v == GraphEdge::kBoundary) bdry[e.u] = std::min(bdry[e.u], e.weight);
                    else {
                        dist[e.u * n + e.v] = std::min(dist[e.u * n + e.v], e.weight);
                        dist[e.v * n + e.u] = std::min(dist[e.v * n + e.u], e.weight);
                    }
                }
                for (size_t k = 0; k < n; k++)
                    for (size_t i = 0; i < n; i++)
                        for (size_t j = 0; j < n; j++)
                            if (dist[i * n + k] < INF && dist[k * n + j] < INF)
                                dist[i * n + j] =
                                    std::min(dist[i * n + j], dist[i * n + k] + dist[k * n + j]);
                for (size_t i = 0; i < n; i++)
                    for (size_t j = 0; j < n; j++)
                        if (dist[i * n + j] < INF && bdry[j] < INF)
                            bfull[i] = std::min(bfull[i], dist[i * n + j] + bdry[j]);
                size_t kk = defects.size();
                std::vector<int64_t> dp(size_t(1) << kk, INF);
                dp[0] = 0;
                for (uint32_t mask = 1; mask < (1u << kk); mask++) {
                    uint32_t i = __builtin_ctz(mask);
                    uint32_t rest = mask ^ (1u << i);
                    if (bfull[defects[i]] < INF && dp[rest] < INF)
                        dp[mask] = dp[rest] + bfull[defects[i]];
                    for (uint32_t j = i + 1; j < kk; j++) {
                        if (!(rest & (1u << j))) continue;
                        int64_t dij = dist[defects[i] * n + defects[j]];
                        uint32_t rest2 = rest ^ (1u << j);
                        if (dij < INF && dp[rest2] < INF)
                            dp[mask] = std::min(dp[mask], dp[rest2] + dij);
                    }
                }
                auto r = dec.decode_general(defects);
                if (llround(r.matching_weight * double(kWeightScale)) != dp[(1u << kk) - 1])
                    blossom_ok = false;
            }
        }
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "gadget channel dev %.1e (<1e-9): %s; sampler vs exhaustive oracle: %s; "
                      "blossom vs brute force x1000: %s",
                      dev, gadgets_ok ? "yes" : "no", sampler_ok ? "yes" : "no",
                      blossom_ok ? "yes" : "no");
        report(7, gadgets_ok && sampler_ok && blossom_ok, buf);
    }

    // --- 8: bit-flip floor -------------------------------------------------
    if (want(8, argc, argv)) {
        CodeSpec s;
        s.family = CodeFamily::RepMZ4Alternated;
        s.d = 5;
        s.rounds = 5;
        NoiseParams nz;
        nz.pz = 1e-3;
        nz.eta = 1;
        nz.px_explicit = 1e-7;
        auto gen = build_circuit(s, nz);
        auto dem = extract_dem(gen.circuit, gen.frame_observables, false);
        double floor_shot = bitflip_floor(dem, 1);

        const uint64_t shots = 30000000;
        auto st = raw_observable_rate(gen, 1, shots, 808, threads);
        double sigma = std::sqrt(floor_shot * (1 - floor_shot) / double(shots));
        bool mc_ok = std::abs(st.ler_shot - floor_shot) <= 2 * sigma;

        // Phase-flip LER of the same circuit.
        auto graph = build_matching_graph(dem);
        MwpmDecoder dec(graph);
        auto phase = sample_until(gen, dec, 4000000, 15000, 809, threads);
        double separation = phase.ler_shot / floor_shot;
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "floor %.3e vs MC %.3e (|diff| %.1f sigma, <= 2); phase LER %.3e, "
                      "separation %.0fx (>= 1000)",
                      floor_shot, st.ler_shot,
                      std::abs(st.ler_shot - floor_shot) / std::max(sigma, 1e-300), phase.ler_shot,
                      separation);
        report(8, mc_ok && separation >= 1000.0, buf);
    }

    // --- 9: appendix CZ-scheme ordering -------------------------------------
    if (want(9, argc, argv)) {
        NoiseParams nz;
        nz.pz = 1e-3;
        nz.eta = 1;
        nz.px_explicit = 0.0;
        double best_knill = 1.0;
        uint32_t best_knill_qubits = 0;
        for (uint32_t d : {3u, 5u}) {
            for (uint32_t r1 : {1u, 2u, 3u}) {
                for (uint32_t r2 : {1u, 2u, 3u}) {
                    CodeSpec s;
                    s.family = CodeFamily::RepCZKnill;
                    s.d = d;
                    s.rounds = 3;
                    s.r1 = r1;
                    s.r2 = r2;
                    auto gen = build_circuit(s, nz);
                    auto dem = extract_dem(gen.circuit, gen.frame_observables, false);
                    auto graph = build_matching_graph(dem);
                    MwpmDecoder dec(graph);
                    auto st = sample_until(gen, dec, 300000, 3000, 900 + d + r1 + r2, threads);
                    if (st.ler_cycle < best_knill) {
                        best_knill = st.ler_cycle;
                        best_knill_qubits = footprint(s).qubit_count;
                    }
                }
            }
        }
        double best_phys = 1.0;
        bool improves_past = false;
        std::string curve;
        for (uint32_t d : {3u, 5u, 7u, 9u, 11u}) {
            double best_d = 1.0;
            for (uint32_t r : {1u, 2u, 3u}) {
                CodeSpec s;
                s.family = CodeFamily::RepCZPhysical;
                s.d = d;
                s.rounds = std::max(2u, d / 2);
                s.r = r;
                auto gen = build_circuit(s, nz);
                auto dem = extract_dem(gen.circuit, gen.frame_observables, false);
                auto graph = build_matching_graph(dem);
                MwpmDecoder dec(graph);
                auto st = sample_until(gen, dec, 1000000, 3000, 950 + d + r, threads);
                best_d = std::min(best_d, st.ler_cycle);
            }
            char b[48];
            std::snprintf(b, sizeof b, "d%u:%.1e ", d, best_d);
            curve += b;
            if (best_d < best_phys) best_phys = best_d;
            if (best_phys < best_knill) improves_past = true;
        }
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "best knill LER %.2e (%u qubits); cz-physical envelope %s-> best %.2e",
                      best_knill, best_knill_qubits, curve.c_str(), best_phys);
        report(9, improves_past && best_phys < best_knill, buf);
    }

    // --- 10: physics formulas ------------------------------------------------
    if (want(10, argc, argv)) {
        bool ok = true;
        double worst = 0;
        for (double gz_ratio : {0.02, 0.05, 0.1}) {
            for (double gamma_ratio : {2.0, 4.0, 8.0}) {
                for (double alpha : {1.0, 1.5, 2.0}) {
                    CatReadoutParams p;
                    p.g2ph = 1.0;
                    p.gz = gz_ratio;
                    p.gamma_b = gamma_ratio;
                    p.alpha = alpha;
                    double nu = p.gz * p.gamma_b / (4 * p.alpha * p.g2ph * p.g2ph);
                    if (nu >= 0.5) continue;
                    double max_rate = std::max({2 * p.g2ph * p.alpha, p.gamma_b, p.gz * p.alpha});
                    double res = cat_linearized_ode_check(
                        p, 160.0 / std::min(p.gamma_b, 2 * p.g2ph * p.alpha), 0.05 / max_rate);
                    worst = std::max(worst, res);
                    ok = ok && res < 1e-6;
                }
            }
        }
        // Exact alpha^2 scaling of the measurement rate.
        CatReadoutParams p;
        p.g2ph = 1.0;
        p.gz = 0.05;
        p.gamma_b = 3.0;
        p.alpha = 1.3;
        auto a1 = cat_readout_steady_state(p);
        p.alpha = 2.6;
        auto a2 = cat_readout_steady_state(p);
        bool scaling_ok = std::abs(a2.gamma_meas / a1.gamma_meas - 4.0) < 1e-12;
        bool combs_ok = true;
        for (uint32_t q = 1; q <= 6; q++) {
            SpinSystemParams sp;
            sp.q = q;
            sp.gamma_e = 1.0;
            sp.b0 = 50.0;
            sp.b_bar = 1.0;
            for (uint32_t k = 0; k < q; k++) sp.a.push_back(0.1 * (k + 1) + 0.013);
            auto comb = spin_drive_comb(sp);
            uint32_t total = 0;
            for (auto& t : comb.tones) total += t.multiplicity;
            combs_ok = combs_ok && comb.raw_tone_count == (1u << (q - 1)) &&
                       total == (1u << (q - 1));
        }
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "ODE residual %.2e (< 1e-6): %s; Gamma alpha^2 scaling exact: %s; comb "
                      "counts 2^(q-1) for q <= 6: %s",
                      worst, ok ? "yes" : "no", scaling_ok ? "yes" : "no",
                      combs_ok ? "yes" : "no");
        report(10, ok && scaling_ok && combs_ok, buf);
    }

    std::printf("%s (%d failure%s)\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                g_failures, g_failures == 1 ? "" : "s");
    return g_failures == 0 ? 0 : 1;
}
