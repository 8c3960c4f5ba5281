#include "biasq/sweep.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "biasq/dem.hpp"
#include "biasq/graph.hpp"

namespace biasq {

ShotStats sample_until(const GeneratedCircuit& gen, const MwpmDecoder& decoder,
                       uint64_t max_shots, uint64_t max_errors, uint64_t seed, int threads) {
    uint64_t shots_done = 0, errors = 0;
    std::string stopped = "max_shots";
    const uint64_t batch_size = 8192;
    while (shots_done < max_shots) {
        uint64_t n = std::min(batch_size, max_shots - shots_done);
        auto batch = sample(gen.circuit, n, seed, gen.frame_observables, shots_done, threads);
        auto stats = decoder.decode_batch(batch, threads);
        errors += stats.errors_per_observable.empty() ? 0 : stats.errors_per_observable[0];
        shots_done += n;
        if (max_errors > 0 && errors >= max_errors) {
            stopped = "max_errors";
            break;
        }
        if (max_errors == 0) break;  // degenerate cap: one batch, no further decoding
    }
    ShotStats st = make_stats(shots_done, errors, gen.spec.rounds);
    st.stopped_by = stopped;
    return st;
}

ShotStats raw_observable_rate(const GeneratedCircuit& gen, uint32_t observable, uint64_t shots,
                              uint64_t seed, int threads) {
    auto batch = sample(gen.circuit, shots, seed, gen.frame_observables, 0, threads);
    uint64_t errors = 0;
    for (uint64_t s = 0; s < shots; s++) errors += batch.observable(s, observable);
    return make_stats(shots, errors, gen.spec.rounds);
}

const char* kSweepCsvHeader =
    "family,d,dx,dz,rounds,pz,px,eta,memory,shots,errors,ler_shot,ler_cycle,ci_low,ci_high,"
    "seed,stopped_by";

static std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string SweepRow::to_csv() const {
    std::ostringstream os;
    os << family_name(task.spec.family) << ',' << task.spec.d << ',' << task.spec.dx << ','
       << task.spec.dz << ',' << task.spec.rounds << ',' << fmt_g(task.noise.pz) << ','
       << fmt_g(task.noise.px()) << ',' << fmt_g(task.noise.eta) << ','
       << (task.spec.memory == MemoryBasis::PlusMemory ? "plus" : "zero") << ',' << stats.shots
       << ',' << stats.errors << ',' << fmt_g(stats.ler_shot) << ',' << fmt_g(stats.ler_cycle)
       << ',' << fmt_g(stats.ci_low) << ',' << fmt_g(stats.ci_high) << ',' << task_seed << ','
       << stats.stopped_by;
    return os.str();
}

namespace {

uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::string task_key(const SweepTask& t) {
    std::ostringstream os;
    os << family_name(t.spec.family) << '|' << t.spec.d << '|' << t.spec.dx << '|' << t.spec.dz
       << '|' << t.spec.rounds << '|' << fmt_g(t.noise.pz) << '|' << fmt_g(t.noise.px()) << '|'
       << fmt_g(t.noise.eta) << '|' << int(t.spec.memory) << '|' << t.spec.r << '|' << t.spec.r1
       << '|' << t.spec.r2;
    return os.str();
}

uint64_t task_seed_of(uint64_t plan_seed, const std::string& key) {
    uint64_t h = mix64(plan_seed);
    for (char c : key) h = mix64(h ^ uint64_t(uint8_t(c)));
    return h;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepPlan& plan) {
    std::string manifest_path = plan.out_path + ".manifest";
    std::map<std::string, std::string> cached;  // key -> csv row
    if (plan.resume && std::filesystem::exists(manifest_path)) {
        std::ifstream mf(manifest_path);
        std::string line;
        while (std::getline(mf, line)) {
            auto tab = line.find('\t');
            if (tab == std::string::npos) continue;
            cached[line.substr(0, tab)] = line.substr(tab + 1);
        }
    }

    std::ofstream mf(manifest_path, std::ios::app);
    std::vector<SweepRow> rows;
    std::vector<std::string> csv_lines;
    for (const auto& task : plan.tasks) {
        std::string key = task_key(task);
        uint64_t tseed = task_seed_of(plan.seed, key);
        if (auto it = cached.find(key); it != cached.end()) {
            csv_lines.push_back(it->second);
            continue;
        }
        auto gen = build_circuit(task.spec, task.noise);
        auto dem = extract_dem(gen.circuit, gen.frame_observables);
        auto graph = build_matching_graph(dem);
        MwpmDecoder decoder(graph);
        SweepRow row;
        row.task = task;
        row.task_seed = tseed;
        row.stats = sample_until(gen, decoder, plan.max_shots, plan.max_errors, tseed,
                                 plan.threads);
        std::string line = row.to_csv();
        csv_lines.push_back(line);
        rows.push_back(row);
        if (plan.resume) {
            mf << key << '\t' << line << '\n';
            mf.flush();
        }
    }
    if (!plan.out_path.empty()) {
        std::ofstream out(plan.out_path);
        out << kSweepCsvHeader << '\n';
        for (const auto& line : csv_lines) out << line << '\n';
    }
    return rows;
}

std::vector<SweepTask> rep_grid(CodeFamily family, const std::vector<uint32_t>& distances,
                                const std::vector<double>& pzs, double px) {
    std::vector<SweepTask> tasks;
    for (uint32_t d : distances) {
        for (double pz : pzs) {
            SweepTask t;
            t.spec.family = family;
            t.spec.d = d;
            t.spec.rounds = d;
            t.spec.memory = MemoryBasis::PlusMemory;
            t.noise.pz = pz;
            t.noise.eta = 1;
            t.noise.px_explicit = px;
            tasks.push_back(t);
        }
    }
    return tasks;
}

std::vector<SweepTask> xzzx_grid(const std::vector<uint32_t>& dxs,
                                 const std::vector<uint32_t>& dzs,
                                 const std::vector<double>& pzs, const std::vector<double>& etas,
                                 MemoryBasis memory) {
    std::vector<SweepTask> tasks;
    for (uint32_t dx : dxs)
        for (uint32_t dz : dzs)
            for (double pz : pzs)
                for (double eta : etas) {
                    SweepTask t;
                    t.spec.family = CodeFamily::XZZX_MZ4;
                    t.spec.dx = dx;
                    t.spec.dz = dz;
                    t.spec.rounds = std::max(dx, dz);
                    t.spec.memory = memory;
                    t.noise.pz = pz;
                    t.noise.eta = eta;
                    tasks.push_back(t);
                }
    return tasks;
}

void write_shots(const std::string& path, const ShotBatch& batch) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    uint64_t header[3] = {batch.detector_count, batch.observable_count, batch.shot_count};
    f.write(reinterpret_cast<const char*>(header), sizeof header);
    size_t bits = batch.detector_count + batch.observable_count;
    size_t bytes_per_shot = (bits + 7) / 8;
    std::vector<uint8_t> row(bytes_per_shot);
    for (uint64_t s = 0; s < batch.shot_count; s++) {
        std::fill(row.begin(), row.end(), 0);
        for (uint32_t d = 0; d < batch.detector_count; d++)
            if (batch.detector(s, d)) row[d >> 3] |= uint8_t(1) << (d & 7);
        for (uint32_t o = 0; o < batch.observable_count; o++) {
            uint32_t bit = batch.detector_count + o;
            if (batch.observable(s, o)) row[bit >> 3] |= uint8_t(1) << (bit & 7);
        }
        f.write(reinterpret_cast<const char*>(row.data()), std::streamsize(row.size()));
    }
}

ShotBatch read_shots(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    uint64_t header[3];
    f.read(reinterpret_cast<char*>(header), sizeof header);
    if (!f) throw std::runtime_error("truncated shots file " + path);
    ShotBatch batch;
    batch.detector_count = uint32_t(header[0]);
    batch.observable_count = uint32_t(header[1]);
    batch.shot_count = header[2];
    batch.detector_bits.assign(batch.shot_count * batch.det_words_per_shot(), 0);
    batch.observable_bits.assign(batch.shot_count * batch.obs_words_per_shot(), 0);
    size_t bits = batch.detector_count + batch.observable_count;
    size_t bytes_per_shot = (bits + 7) / 8;
    std::vector<uint8_t> row(bytes_per_shot);
    for (uint64_t s = 0; s < batch.shot_count; s++) {
        f.read(reinterpret_cast<char*>(row.data()), std::streamsize(row.size()));
        if (!f) throw std::runtime_error("truncated shots file " + path);
        for (uint32_t d = 0; d < batch.detector_count; d++)
            if ((row[d >> 3] >> (d & 7)) & 1)
                batch.detector_bits[s * batch.det_words_per_shot() + (d >> 6)] |=
                    uint64_t(1) << (d & 63);
        for (uint32_t o = 0; o < batch.observable_count; o++) {
            uint32_t bit = batch.detector_count + o;
            if ((row[bit >> 3] >> (bit & 7)) & 1)
                batch.observable_bits[s * batch.obs_words_per_shot() + (o >> 6)] |=
                    uint64_t(1) << (o & 63);
        }
    }
    return batch;
}

namespace {

void write_manifest_json(const std::string& dir, const std::string& figure,
                         const std::vector<std::string>& files, uint64_t max_shots,
                         uint64_t max_errors) {
    nlohmann::json j;
    j["figure"] = figure;
    j["files"] = files;
    j["budget"] = {{"max_shots", max_shots}, {"max_errors", max_errors}};
    j["deviations"] = {
        "desk-scale shot budgets instead of the full production budgets",
        "single-seed runs; confidence bounds reported per point"};
    std::ofstream f(dir + "/manifest.json");
    f << j.dump(2) << '\n';
}

}  // namespace

std::vector<std::string> run_reproduction(const std::string& figure, const std::string& out_dir,
                                          uint64_t max_shots, uint64_t max_errors, uint64_t seed,
                                          int threads) {
    const std::vector<std::string> supported = {
        "xzzx",           "overhead",          "repcode_comparison", "repcode_lambda",
        "repcode_overhead", "alt_vs_sim_combined", "alt_vs_sim_overhead", "cz_numerics"};
    if (std::find(supported.begin(), supported.end(), figure) == supported.end()) {
        std::string msg = "unsupported figure '" + figure + "'; supported:";
        for (auto& s : supported) msg += " " + s;
        throw std::runtime_error(msg);
    }
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> files;

    auto run_plan = [&](SweepPlan plan, const std::string& name) {
        plan.max_shots = max_shots;
        plan.max_errors = max_errors;
        plan.seed = seed;
        plan.threads = threads;
        plan.out_path = out_dir + "/" + name;
        run_sweep(plan);
        files.push_back(plan.out_path);
    };

    std::vector<double> rep_pz = {3e-3, 5e-3, 7e-3, 9e-3, 11e-3};
    std::vector<uint32_t> rep_d = {3, 5, 7, 9, 11};

    if (figure == "repcode_comparison" || figure == "repcode_lambda" ||
        figure == "repcode_overhead") {
        SweepPlan p1;
        p1.tasks = rep_grid(CodeFamily::RepMZ4Alternated, rep_d, rep_pz, 1e-9);
        run_plan(p1, "rep_alternated.csv");
        SweepPlan p2;
        p2.tasks = rep_grid(CodeFamily::RepBPCNOT, rep_d, rep_pz, 1e-9);
        run_plan(p2, "rep_bpcnot.csv");
    }
    if (figure == "alt_vs_sim_combined" || figure == "alt_vs_sim_overhead" ||
        figure == "repcode_lambda") {
        SweepPlan p;
        p.tasks = rep_grid(CodeFamily::RepMZ4Simultaneous, rep_d, rep_pz, 1e-9);
        run_plan(p, "rep_simultaneous.csv");
    }
    if (figure == "xzzx" || figure == "overhead") {
        SweepPlan p;
        for (auto mem : {MemoryBasis::PlusMemory, MemoryBasis::ZeroMemory}) {
            auto tasks = xzzx_grid({3}, {5, 7, 9}, {1e-3, 3e-3, 5e-3}, {100, 1000}, mem);
            p.tasks.insert(p.tasks.end(), tasks.begin(), tasks.end());
        }
        run_plan(p, "xzzx.csv");
    }
    if (figure == "cz_numerics") {
        SweepPlan p;
        for (uint32_t d : {3u, 5u, 7u}) {
            for (uint32_t r : {1u, 2u}) {
                SweepTask t;
                t.spec.family = CodeFamily::RepCZPhysical;
                t.spec.d = d;
                t.spec.rounds = d;
                t.spec.r = r;
                t.noise.pz = 1e-3;
                t.noise.eta = 1;
                t.noise.px_explicit = 0.0;
                p.tasks.push_back(t);
            }
        }
        for (uint32_t d : {3u, 5u}) {
            for (uint32_t r1 : {1u, 2u}) {
                for (uint32_t r2 : {1u, 2u}) {
                    SweepTask t;
                    t.spec.family = CodeFamily::RepCZKnill;
                    t.spec.d = d;
                    t.spec.rounds = 2;
                    t.spec.r1 = r1;
                    t.spec.r2 = r2;
                    t.noise.pz = 1e-3;
                    t.noise.eta = 1;
                    t.noise.px_explicit = 0.0;
                    p.tasks.push_back(t);
                }
            }
        }
        run_plan(p, "cz_schemes.csv");
    }
    write_manifest_json(out_dir, figure, files, max_shots, max_errors);
    files.push_back(out_dir + "/manifest.json");
    return files;
}

}  // namespace biasq
