#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "biasq/codegen.hpp"
#include "biasq/dem.hpp"
#include "biasq/decoder.hpp"
#include "biasq/graph.hpp"
#include "biasq/overhead.hpp"
#include "biasq/physics.hpp"
#include "biasq/sweep.hpp"

using namespace biasq;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << text;
}

std::vector<double> parse_list_d(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::vector<uint32_t> parse_list_u(const std::string& s) {
    std::vector<uint32_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(uint32_t(std::stoul(tok)));
    return out;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int col(const std::string& name) const {
        for (size_t i = 0; i < header.size(); i++)
            if (header[i] == name) return int(i);
        throw std::runtime_error("missing CSV column " + name);
    }
};

CsvTable read_csv(const std::string& path) {
    CsvTable t;
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string line;
    bool first = true;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) cells.push_back(tok);
        if (first) {
            t.header = cells;
            first = false;
        } else {
            t.rows.push_back(cells);
        }
    }
    return t;
}

double log_ci_weight(double ci_low, double ci_high, double ler) {
    if (ci_low <= 0 || ci_high <= ci_low || ler <= 0) return 1.0;
    double width = std::log(ci_high) - std::log(ci_low);
    if (width < 1e-6) width = 1e-6;
    return 1.0 / (width * width);
}

nlohmann::json fit_to_json(const FitResult& fr) {
    nlohmann::json j;
    const char* names[] = {"plus", "zero", "sc", "lambda", "pth_eta"};
    j["model"] = names[int(fr.model)];
    j["params"] = fr.params;
    j["residual"] = fr.residual;
    j["points_used"] = fr.points_used;
    j["warnings"] = fr.warnings;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"circuit-level simulator for QND multi-Z biased-noise error correction"};
    app.require_subcommand(1);
    app.fallthrough();
    uint64_t seed = 1;
    int threads = 1;
    std::string format = "csv";
    app.add_option("--seed", seed, "global random seed");
    app.add_option("--threads", threads, "worker threads");
    app.add_option("--format", format, "csv|json output format where applicable");

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "emit a syndrome-extraction circuit");
    std::string family_s = "rep_mz4_alternated", memory_s = "plus", out_path = "circuit.txt";
    CodeSpec spec;
    NoiseParams noise;
    double px_opt = -1;
    gen_cmd->add_option("--family", family_s, "code family")->required();
    gen_cmd->add_option("--d", spec.d, "distance");
    gen_cmd->add_option("--dx", spec.dx, "X distance (xzzx)");
    gen_cmd->add_option("--dz", spec.dz, "Z distance (xzzx)");
    gen_cmd->add_option("--rounds", spec.rounds, "syndrome rounds")->required();
    gen_cmd->add_option("--pz", noise.pz, "phase-flip rate")->required();
    gen_cmd->add_option("--eta", noise.eta, "noise bias");
    gen_cmd->add_option("--px", px_opt, "explicit bit-flip rate (default pz/eta)");
    gen_cmd->add_option("--r", spec.r, "meter repetitions (rep_cz_physical)");
    gen_cmd->add_option("--r1", spec.r1, "ZZ-prep repetitions (rep_cz_knill)");
    gen_cmd->add_option("--r2", spec.r2, "logical-ZZ repetitions (rep_cz_knill)");
    gen_cmd->add_option("--memory", memory_s, "plus|zero");
    gen_cmd->add_option("-o,--out", out_path, "output circuit file");

    // dem
    auto* dem_cmd = app.add_subcommand("dem", "extract the detector error model");
    std::string dem_in, dem_out = "dem.json";
    dem_cmd->add_option("-i,--in", dem_in, "circuit file")->required();
    dem_cmd->add_option("-o,--out", dem_out, "output JSON");

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "Pauli-frame sample a circuit");
    std::string sin, sout = "shots.bin";
    uint64_t nshots = 1000;
    sample_cmd->add_option("-i,--in", sin, "circuit file")->required();
    sample_cmd->add_option("--shots", nshots, "shot count")->required();
    sample_cmd->add_option("-o,--out", sout, "output packed bits");

    // decode
    auto* decode_cmd = app.add_subcommand("decode", "decode sampled shots");
    std::string din, dshots, dout = "stats.json";
    decode_cmd->add_option("-i,--in", din, "circuit file")->required();
    decode_cmd->add_option("--shots", dshots, "shots.bin from `sample`")->required();
    decode_cmd->add_option("-o,--out", dout, "output stats JSON");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run a Monte-Carlo grid");
    std::string sw_family = "rep_mz4_alternated", sw_d = "3,5,7", sw_pz = "0.003,0.005";
    std::string sw_dx = "3", sw_dz = "7,9,11", sw_memory = "plus", sw_out = "sweep.csv";
    double sw_eta = 1e4, sw_px = -1;
    uint64_t sw_max_shots = 1000000, sw_max_errors = 1000;
    bool sw_no_resume = false;
    sweep_cmd->add_option("--family", sw_family, "code family")->required();
    sweep_cmd->add_option("--d-list", sw_d, "distances, comma separated");
    sweep_cmd->add_option("--dx-list", sw_dx, "X distances (xzzx)");
    sweep_cmd->add_option("--dz-list", sw_dz, "Z distances (xzzx)");
    sweep_cmd->add_option("--pz-list", sw_pz, "phase-flip rates");
    sweep_cmd->add_option("--eta", sw_eta, "noise bias");
    sweep_cmd->add_option("--px", sw_px, "explicit bit-flip rate");
    sweep_cmd->add_option("--memory", sw_memory, "plus|zero");
    sweep_cmd->add_option("--max-shots", sw_max_shots, "shot cap per task");
    sweep_cmd->add_option("--max-errors", sw_max_errors, "error cap per task");
    sweep_cmd->add_flag("--no-resume", sw_no_resume, "ignore any existing manifest");
    sweep_cmd->add_option("-o,--out", sw_out, "output CSV");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit a scaling ansatz to sweep output");
    std::string fit_model, fit_in, fit_out = "fit.json";
    fit_cmd->add_option("--model", fit_model, "plus|zero|sc|lambda")->required();
    fit_cmd->add_option("-i,--in", fit_in, "sweep CSV")->required();
    fit_cmd->add_option("-o,--out", fit_out, "output JSON");

    // overhead
    auto* ov_cmd = app.add_subcommand("overhead", "qubit-overhead staircase");
    std::string ov_strategy, ov_targets = "1e-7,1e-8,1e-9,1e-10,1e-11", ov_fits, ov_out = "staircase.csv";
    double ov_pz = 1e-3, ov_eta = 1e3, ov_px = -1;
    ov_cmd->add_option("--strategy", ov_strategy, "strategy family")->required();
    ov_cmd->add_option("--pz", ov_pz, "phase-flip rate");
    ov_cmd->add_option("--eta", ov_eta, "noise bias");
    ov_cmd->add_option("--px", ov_px, "bit-flip rate (repetition strategies)");
    ov_cmd->add_option("--targets", ov_targets, "target LERs, comma separated");
    ov_cmd->add_option("--fits", ov_fits, "fit JSON file")->required();
    ov_cmd->add_option("-o,--out", ov_out, "output CSV");

    // physics
    auto* ph_cmd = app.add_subcommand("physics", "physical-layer calculators");
    auto* comb_cmd = ph_cmd->add_subcommand("spin-comb", "multi-tone drive comb");
    SpinSystemParams comb;
    std::string comb_a;
    comb_cmd->add_option("--q", comb.q, "nuclear spin count")->required();
    comb_cmd->add_option("--gamma-e", comb.gamma_e, "electron gyromagnetic ratio")->required();
    comb_cmd->add_option("--gamma-n", comb.gamma_n, "nuclear gyromagnetic ratio");
    comb_cmd->add_option("--b0", comb.b0, "static field")->required();
    comb_cmd->add_option("--a", comb_a, "hyperfine strengths, comma separated")->required();
    comb_cmd->add_option("--b-bar", comb.b_bar, "drive amplitude")->required();
    auto* cat_cmd = ph_cmd->add_subcommand("cat-readout", "three-cat joint-Z readout");
    CatReadoutParams cat;
    bool ode_check = false;
    cat_cmd->add_option("--g2ph", cat.g2ph, "two-photon coupling")->required();
    cat_cmd->add_option("--gz", cat.gz, "three-mode coupling")->required();
    cat_cmd->add_option("--gamma", cat.gamma_b, "buffer decay")->required();
    cat_cmd->add_option("--alpha", cat.alpha, "cat amplitude")->required();
    cat_cmd->add_flag("--ode-check", ode_check, "also integrate the linearized modes");

    // reproduce
    auto* rep_cmd = app.add_subcommand("reproduce", "desk-scale figure bundles");
    std::string fig, rep_out = "repro";
    uint64_t rep_shots = 1000000, rep_errors = 1000;
    rep_cmd->add_option("--figure", fig, "figure name")->required();
    rep_cmd->add_option("-o,--out", rep_out, "output directory");
    rep_cmd->add_option("--max-shots", rep_shots, "shot cap per task");
    rep_cmd->add_option("--max-errors", rep_errors, "error cap per task");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_cmd->parsed()) {
            auto fam = family_from_name(family_s);
            if (!fam) {
                std::cerr << "unknown family " << family_s << "\n";
                return kExitUsage;
            }
            spec.family = *fam;
            spec.memory = memory_s == "zero" ? MemoryBasis::ZeroMemory : MemoryBasis::PlusMemory;
            if (px_opt >= 0) noise.px_explicit = px_opt;
            auto gen = build_circuit(spec, noise);
            write_file(out_path, serialize_circuit(gen.circuit));
        } else if (dem_cmd->parsed()) {
            Circuit c = parse_circuit(read_file(dem_in));
            auto diags = validate(c);
            if (!diags.empty()) {
                std::cerr << "validation failed: " << diags.front().message << "\n";
                return kExitValidation;
            }
            auto dem = extract_dem(c, {}, false);
            write_file(dem_out, dem.to_json() + "\n");
        } else if (sample_cmd->parsed()) {
            Circuit c = parse_circuit(read_file(sin));
            auto diags = validate(c);
            if (!diags.empty()) {
                std::cerr << "validation failed: " << diags.front().message << "\n";
                return kExitValidation;
            }
            auto batch = sample(c, nshots, seed, {}, 0, threads);
            write_shots(sout, batch);
        } else if (decode_cmd->parsed()) {
            Circuit c = parse_circuit(read_file(din));
            auto diags = validate(c);
            if (!diags.empty()) {
                std::cerr << "validation failed: " << diags.front().message << "\n";
                return kExitValidation;
            }
            auto dem = extract_dem(c, {}, false);
            auto graph = build_matching_graph(dem);
            MwpmDecoder decoder(graph);
            auto batch = read_shots(dshots);
            auto stats = decoder.decode_batch(batch, threads);
            nlohmann::json j;
            j["shots"] = stats.shots;
            j["errors_per_observable"] = stats.errors_per_observable;
            j["shots_with_any_error"] = stats.shots_with_any_error;
            if (!stats.errors_per_observable.empty()) {
                auto st = make_stats(stats.shots, stats.errors_per_observable[0], 1);
                j["ler_shot"] = st.ler_shot;
                j["ci_low"] = st.ci_low;
                j["ci_high"] = st.ci_high;
            }
            write_file(dout, j.dump(2) + "\n");
        } else if (sweep_cmd->parsed()) {
            auto fam = family_from_name(sw_family);
            if (!fam) {
                std::cerr << "unknown family " << sw_family << "\n";
                return kExitUsage;
            }
            SweepPlan plan;
            plan.max_shots = sw_max_shots;
            plan.max_errors = sw_max_errors;
            plan.seed = seed;
            plan.threads = threads;
            plan.out_path = sw_out;
            plan.resume = !sw_no_resume;
            MemoryBasis mem =
                sw_memory == "zero" ? MemoryBasis::ZeroMemory : MemoryBasis::PlusMemory;
            if (*fam == CodeFamily::XZZX_MZ4) {
                plan.tasks = xzzx_grid(parse_list_u(sw_dx), parse_list_u(sw_dz),
                                       parse_list_d(sw_pz), {sw_eta}, mem);
            } else {
                double px = sw_px >= 0 ? sw_px : 1e-9;
                plan.tasks = rep_grid(*fam, parse_list_u(sw_d), parse_list_d(sw_pz), px);
                for (auto& t : plan.tasks) {
                    t.noise.eta = sw_eta;
                    if (*fam == CodeFamily::RotatedSC_DepolCX) {
                        t.noise.px_explicit.reset();
                        t.spec.memory = mem;
                    }
                }
            }
            run_sweep(plan);
        } else if (fit_cmd->parsed()) {
            auto csv = read_csv(fit_in);
            int c_d = csv.col("d"), c_dx = csv.col("dx"), c_dz = csv.col("dz");
            int c_pz = csv.col("pz"), c_eta = csv.col("eta"), c_cyc = csv.col("ler_cycle");
            int c_err = csv.col("errors"), c_lo = csv.col("ci_low"), c_hi = csv.col("ci_high");
            FitResult fr;
            if (fit_model == "lambda") {
                std::vector<RepPoint> pts;
                for (auto& r : csv.rows) {
                    RepPoint p;
                    p.d = uint32_t(std::stoul(r[c_d]));
                    p.pz = std::stod(r[c_pz]);
                    p.ler_cycle = std::stod(r[c_cyc]);
                    p.errors = std::stoull(r[c_err]);
                    p.weight = log_ci_weight(std::stod(r[c_lo]), std::stod(r[c_hi]), p.ler_cycle);
                    pts.push_back(p);
                }
                fr = fit_repcode_lambda(pts);
            } else if (fit_model == "plus" || fit_model == "zero") {
                std::vector<XzzxPoint> pts;
                for (auto& r : csv.rows) {
                    XzzxPoint p;
                    p.dx = uint32_t(std::stoul(r[c_dx]));
                    p.dz = uint32_t(std::stoul(r[c_dz]));
                    p.pz = std::stod(r[c_pz]);
                    p.eta = std::stod(r[c_eta]);
                    p.ler = std::stod(r[c_cyc]);
                    p.errors = std::stoull(r[c_err]);
                    p.weight = log_ci_weight(std::stod(r[c_lo]), std::stod(r[c_hi]), p.ler);
                    pts.push_back(p);
                }
                fr = fit_model == "plus" ? fit_ansatz_plus(pts) : fit_ansatz_zero(pts);
            } else if (fit_model == "sc") {
                int c_mem = csv.col("memory");
                FitResult combined;
                combined.model = FitModel::AnsatzSC;
                for (const char* mem : {"plus", "zero"}) {
                    std::vector<ScPoint> pts;
                    for (auto& r : csv.rows) {
                        if (r[c_mem] != mem) continue;
                        ScPoint p;
                        p.d = uint32_t(std::stoul(r[c_d]));
                        p.pz = std::stod(r[c_pz]);
                        p.ler = std::stod(r[c_cyc]);
                        p.errors = std::stoull(r[c_err]);
                        p.weight = log_ci_weight(std::stod(r[c_lo]), std::stod(r[c_hi]), p.ler);
                        pts.push_back(p);
                    }
                    if (pts.empty()) continue;
                    auto f = fit_ansatz_sc(pts);
                    std::string suffix = std::string(mem) == "plus" ? "_x" : "_z";
                    combined.params["A" + suffix] = f.params.at("A");
                    combined.params["p_th" + suffix] = f.params.at("p_th");
                    combined.points_used += f.points_used;
                }
                fr = combined;
            } else {
                std::cerr << "unknown fit model " << fit_model << "\n";
                return kExitUsage;
            }
            write_file(fit_out, fit_to_json(fr).dump(2) + "\n");
        } else if (ov_cmd->parsed()) {
            auto fam = family_from_name(ov_strategy);
            if (!fam) {
                std::cerr << "unknown strategy " << ov_strategy << "\n";
                return kExitUsage;
            }
            auto j = nlohmann::json::parse(read_file(ov_fits));
            std::ostringstream os;
            os << "target_ler,qubits,d,dx,dz,achieved_ler,strategy,extrapolated\n";
            auto params_of = [&](const std::string& key) {
                FitResult fr;
                for (auto& [k, v] : j.at(key).at("params").items())
                    fr.params[k] = v.get<double>();
                return fr;
            };
            for (double target : parse_list_d(ov_targets)) {
                OverheadPoint pt;
                if (*fam == CodeFamily::XZZX_MZ4) {
                    pt = optimize_xzzx(target, ov_pz, ov_eta, params_of("plus"),
                                       params_of("zero"));
                } else if (*fam == CodeFamily::RotatedSC_DepolCX) {
                    pt = optimize_rotated_sc(target, ov_pz, ov_eta, params_of("sc"));
                } else {
                    RepOverheadModel model;
                    auto lam = params_of("lambda");
                    model.lambda = lam.params.at("p_th_eff") / ov_pz;
                    model.A = lam.params.count("A_0") ? lam.params.at("A_0") : 0.1;
                    model.floor_per_distance =
                        j.count("floor_per_distance") ? j.at("floor_per_distance").get<double>()
                                                      : (ov_px > 0 ? 20 * ov_px : 0.0);
                    pt = optimize_repetition(target, *fam, model);
                }
                os << pt.target_ler << ',' << pt.qubits << ',' << pt.d << ',' << pt.dx << ','
                   << pt.dz << ',' << pt.achieved_ler << ',' << family_name(pt.strategy) << ','
                   << (pt.extrapolated ? 1 : 0) << '\n';
            }
            write_file(ov_out, os.str());
        } else if (comb_cmd->parsed()) {
            comb.a.clear();
            for (double a : parse_list_d(comb_a)) comb.a.push_back(a);
            auto result = spin_drive_comb(comb);
            nlohmann::json j;
            j["t_pulse"] = result.t_pulse;
            j["raw_tone_count"] = result.raw_tone_count;
            auto& tones = j["tones"] = nlohmann::json::array();
            for (auto& t : result.tones)
                tones.push_back({{"omega", t.omega}, {"multiplicity", t.multiplicity}});
            std::cout << j.dump(2) << "\n";
        } else if (cat_cmd->parsed()) {
            auto ss = cat_readout_steady_state(cat);
            nlohmann::json j;
            j["zeta"] = ss.zeta;
            j["nu"] = ss.nu;
            j["b_sigma"] = {{"re", ss.b_sigma.real()}, {"im", ss.b_sigma.imag()}};
            j["gamma_meas"] = ss.gamma_meas;
            if (ode_check) {
                double max_rate =
                    std::max({2 * cat.g2ph * cat.alpha, cat.gamma_b, cat.gz * cat.alpha});
                double step = 0.05 / max_rate;
                double dur = 120.0 / std::min(cat.gamma_b, 2 * cat.g2ph * cat.alpha);
                j["ode_residual"] = cat_linearized_ode_check(cat, dur, step);
            }
            std::cout << j.dump(2) << "\n";
        } else if (rep_cmd->parsed()) {
            auto files = run_reproduction(fig, rep_out, rep_shots, rep_errors, seed, threads);
            for (auto& f : files) std::cout << f << "\n";
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::runtime_error& e) {
        std::string what = e.what();
        std::cerr << "error: " << what << "\n";
        if (what.find("unreachable") != std::string::npos ||
            what.find("floor-limited") != std::string::npos)
            return kExitInfeasible;
        return kExitValidation;
    }
    return 0;
}
