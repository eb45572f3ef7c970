#include "tmatch/cli.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "tmatch/serialize.hpp"

namespace tmatch::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string index_name(const char* stem, std::size_t i, const std::string& ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%04zu.%s", stem, i, ext.c_str());
    return buf;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write file: " + out_path);
        out << j.dump(2) << "\n";
    }
}

int resolve_size(int size, const std::string& template_path, int axis) {
    if (size > 0) return size;
    if (template_path.empty())
        throw std::invalid_argument("template window size missing (use --size or --template)");
    const Image t = load_image(template_path);
    return axis == 0 ? t.rows() : t.cols();
}

}  // namespace

int cmd_synth(const SynthOptions& opts) {
    if (opts.out_dir.empty()) throw std::invalid_argument("synth: output directory required");
    if (opts.image_format != "pgm" && opts.image_format != "png")
        throw std::invalid_argument("synth: image format must be pgm or png");

    const Corpus corpus = synth_corpus(opts.spec);
    const fs::path root(opts.out_dir);
    fs::create_directories(root / "images");
    fs::create_directories(root / "templates");

    json manifest;
    manifest["seed"] = opts.spec.seed;
    manifest["config"] = {{"rows", opts.spec.image.rows},
                          {"cols", opts.spec.image.cols},
                          {"smooth_sigma", opts.spec.image.smooth_sigma},
                          {"smooth_passes", opts.spec.image.smooth_passes},
                          {"lo", opts.spec.image.lo},
                          {"hi", opts.spec.image.hi},
                          {"image_count", opts.spec.image_count},
                          {"template_sizes", opts.spec.template_sizes},
                          {"per_size", opts.spec.per_size},
                          {"gain", opts.spec.gain},
                          {"offset", opts.spec.offset}};

    json images = json::array();
    for (std::size_t i = 0; i < corpus.images.size(); ++i) {
        const std::string rel = "images/" + index_name("search", i, opts.image_format);
        save_image(corpus.images[i], (root / rel).string());
        images.push_back(rel);
    }
    manifest["images"] = images;

    json entries = json::array();
    for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
        const CorpusEntry& e = corpus.entries[i];
        const std::string rel = "templates/" + index_name("t", i, opts.image_format);
        save_image(extract_template(corpus.images[std::size_t(e.image_index)], e),
                   (root / rel).string());
        entries.push_back({{"template", rel},
                           {"image_index", e.image_index},
                           {"row", e.row},
                           {"col", e.col},
                           {"m", e.m},
                           {"n", e.n},
                           {"gain", e.gain},
                           {"offset", e.offset}});
    }
    manifest["entries"] = entries;

    std::ofstream out(root / "manifest.json");
    if (!out) throw std::runtime_error("cannot write manifest in " + opts.out_dir);
    out << manifest.dump(2) << "\n";
    return 0;
}

int cmd_match(const MatchOptions& opts) {
    const Image t = load_image(opts.template_path);
    const Image I = load_image(opts.image_path);
    const MatchResult result = match(t, I, opts.params);
    emit(to_json(result), opts.out_path);
    return result.below_threshold ? 2 : 0;
}

int cmd_egs(const EgsOptions& opts) {
    const Image I = load_image(opts.image_path);
    const int m = resolve_size(opts.size_m, opts.template_path, 0);
    const int n = resolve_size(opts.size_n > 0 ? opts.size_n : opts.size_m,
                               opts.template_path, 1);

    EgsParams params;
    params.h0 = opts.params.h0;
    params.w0 = opts.params.w0;
    params.rho_tb = opts.params.rho_th;
    params.xi_fraction = opts.params.xi_fraction;
    const EGSResult result = efficient_group_size(I, m, n, params);

    if (!opts.save_map_path.empty())
        save_autocorr(result.map, autocorr_cache_key(I, m, n, result.h, result.w),
                      opts.save_map_path);
    emit(to_json(result), opts.out_path);
    return 0;
}

int cmd_opta(const OptAOptions& opts) {
    const Image I = load_image(opts.image_path);
    const int m = resolve_size(opts.size_m, opts.template_path, 0);
    const int n = resolve_size(opts.size_n > 0 ? opts.size_n : opts.size_m,
                               opts.template_path, 1);

    OptAParams params;
    params.rho_th = opts.params.rho_th;
    params.rho_max = opts.params.rho_max;
    params.kernel = opts.params.kernel;
    params.margin = opts.params.opta_margin;
    params.egs.h0 = opts.params.h0;
    params.egs.w0 = opts.params.w0;
    params.egs.rho_tb = opts.params.rho_th;
    params.egs.xi_fraction = opts.params.xi_fraction;
    const OptAResult result = optimize_autocorrelation(I, m, n, params);

    if (!opts.out_image_path.empty()) save_image(result.image, opts.out_image_path);
    emit(opta_sidecar(result), opts.out_path);
    return 0;
}

namespace {

struct BenchAccumulator {
    double time_ms = 0.0;
    double elim_pct = 0.0;
    double ops = 0.0;
    long long correct = 0;
    long long runs = 0;
};

MatchMode parse_mode(const std::string& name) {
    if (name == "brute") return MatchMode::brute;
    if (name == "egs") return MatchMode::egs;
    if (name == "opta") return MatchMode::opta;
    throw std::invalid_argument("unknown mode: " + name);
}

}  // namespace

int cmd_bench(const BenchOptions& opts) {
    const fs::path root(opts.corpus_dir);
    std::ifstream mf(root / "manifest.json");
    if (!mf) throw std::runtime_error("corpus missing (no manifest.json in " +
                                      opts.corpus_dir + ")");
    json manifest;
    mf >> manifest;
    if (opts.modes.empty()) throw std::invalid_argument("bench: no modes selected");
    if (manifest["entries"].empty()) throw std::invalid_argument("bench: corpus has no entries");

    std::vector<Image> images;
    for (const auto& rel : manifest["images"])
        images.push_back(load_image((root / rel.get<std::string>()).string()));

    struct Entry {
        Image t;
        int image_index, row, col, m, n;
    };
    std::vector<Entry> entries;
    std::set<int> sizes;
    for (const auto& je : manifest["entries"]) {
        Entry e;
        e.t = load_image((root / je["template"].get<std::string>()).string());
        e.image_index = je["image_index"].get<int>();
        e.row = je["row"].get<int>();
        e.col = je["col"].get<int>();
        e.m = je["m"].get<int>();
        e.n = je["n"].get<int>();
        sizes.insert(e.m);
        entries.push_back(std::move(e));
    }

    // (size, mode) -> accumulator; preparation is shared per (image, size).
    std::map<std::pair<int, std::string>, BenchAccumulator> table;
    for (const std::string& mode_name : opts.modes) {
        const MatchMode mode = parse_mode(mode_name);
        MatchParams params = opts.params;
        params.mode = mode;

        std::map<std::pair<int, int>, PreparedEgs> egs_cache;
        std::map<std::pair<int, int>, PreparedOptA> opta_cache;
        for (const Entry& e : entries) {
            const Image& I = images[std::size_t(e.image_index)];
            MatchResult r;
            if (mode == MatchMode::brute) {
                BruteOptions bo;
                bo.threads = params.threads;
                const auto start = std::chrono::steady_clock::now();
                r = brute_force_match(e.t, I, bo);
                r.stats.wall_ms = std::chrono::duration<double, std::milli>(
                                      std::chrono::steady_clock::now() - start)
                                      .count();
            } else if (mode == MatchMode::egs) {
                const auto key = std::make_pair(e.image_index, e.m);
                auto it = egs_cache.find(key);
                if (it == egs_cache.end())
                    it = egs_cache.emplace(key, prepare_egs(I, e.m, e.n, params)).first;
                r = run_egs(e.t, I, it->second, params);
            } else {
                const auto key = std::make_pair(e.image_index, e.m);
                auto it = opta_cache.find(key);
                if (it == opta_cache.end())
                    it = opta_cache.emplace(key, prepare_opta(I, e.m, e.n, params)).first;
                r = run_opta(e.t, I, it->second, params);
            }

            BenchAccumulator& acc = table[{e.m, mode_name}];
            acc.time_ms += r.stats.wall_ms;
            acc.elim_pct += r.stats.elim_pct;
            acc.ops += double(r.stats.ops);
            acc.runs += 1;
            if (std::abs(r.refined_row - e.row) <= opts.accuracy_tolerance &&
                std::abs(r.refined_col - e.col) <= opts.accuracy_tolerance)
                acc.correct += 1;
        }
    }

    json rows = json::array();
    std::string csv = "size,mode,time_ms,elim_pct,accuracy_pct,ops\n";
    char line[256];
    for (int size : sizes) {
        for (const std::string& mode_name : opts.modes) {
            const BenchAccumulator& acc = table[{size, mode_name}];
            if (acc.runs == 0) continue;
            const double time_ms = acc.time_ms / double(acc.runs);
            const double elim = acc.elim_pct / double(acc.runs);
            const double accuracy = 100.0 * double(acc.correct) / double(acc.runs);
            const double ops = acc.ops / double(acc.runs);
            std::snprintf(line, sizeof line, "%d,%s,%.3f,%.4f,%.2f,%.1f\n", size,
                          mode_name.c_str(), time_ms, elim, accuracy, ops);
            csv += line;
            rows.push_back({{"size", size},
                            {"mode", mode_name},
                            {"time_ms", time_ms},
                            {"elim_pct", elim},
                            {"accuracy_pct", accuracy},
                            {"ops", ops},
                            {"runs", acc.runs}});
        }
    }

    const std::string csv_path =
        opts.out_csv.empty() ? (root / "bench.csv").string() : opts.out_csv;
    const std::string json_path =
        opts.out_json.empty() ? (root / "bench.json").string() : opts.out_json;
    std::ofstream csv_out(csv_path);
    if (!csv_out) throw std::runtime_error("cannot write file: " + csv_path);
    csv_out << csv;
    std::ofstream json_out(json_path);
    if (!json_out) throw std::runtime_error("cannot write file: " + json_path);
    json_out << json{{"rows", rows}}.dump(2) << "\n";

    if (!opts.quiet) {
        if (opts.stdout_format == "json")
            std::cout << json{{"rows", rows}}.dump(2) << "\n";
        else
            std::cout << csv;
    }
    return 0;
}

}  // namespace tmatch::cli
