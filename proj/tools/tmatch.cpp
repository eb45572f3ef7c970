// tmatch: correlation template matching with transitive-bound elimination,
// automatic group sizing, and controlled non-uniform blur.
#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "tmatch/cli.hpp"

namespace {

tmatch::BlurKernel parse_kernel(const std::string& spec) {
    if (spec.empty() || spec == "default") return tmatch::BlurKernel::default_profile();
    if (spec == "delta") return tmatch::BlurKernel::delta();
    if (spec.rfind("gauss:", 0) == 0) {
        const std::string args = spec.substr(6);
        const auto comma = args.find(',');
        if (comma == std::string::npos)
            throw CLI::ValidationError("--kernel", "expected gauss:<sigma>,<tg>");
        return tmatch::gaussian_kernel(std::stod(args.substr(0, comma)),
                                       std::stod(args.substr(comma + 1)));
    }
    // Comma-separated odd-length profile, e.g. 0.05,0.2,0.5,0.2,0.05
    std::vector<double> profile;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const auto comma = spec.find(',', pos);
        const std::string tok = spec.substr(pos, comma == std::string::npos ? spec.size() - pos
                                                                            : comma - pos);
        profile.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return tmatch::BlurKernel::from_profile(std::move(profile));
}

void add_engine_flags(CLI::App* cmd, tmatch::MatchParams& params, std::string& kernel_spec,
                      double& init_threshold, bool& has_init) {
    cmd->add_option("--rho-th", params.rho_th, "Detection/estimation threshold")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--rho-max", params.rho_max, "Peak value guarded by the blur quality bound")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--xi", params.xi_fraction, "Group-growth stop fraction");
    cmd->add_option("--h0", params.h0, "Initial group height (odd)");
    cmd->add_option("--w0", params.w0, "Initial group width (odd)");
    cmd->add_option("--kernel", kernel_spec,
                    "Blur kernel: default | delta | gauss:<sigma>,<tg> | w1,w2,...");
    cmd->add_option("--opta-margin", params.opta_margin, "Blur-iteration stop fraction");
    auto* thr = cmd->add_option("--threshold", init_threshold,
                                "User initial search threshold (enables below-threshold exit)");
    cmd->add_flag("--parallel", params.parallel, "Partition scan 2 across threads");
    cmd->add_option("--threads", params.threads, "Worker count for --parallel");
    cmd->parse_complete_callback([thr, &has_init] { has_init = thr->count() > 0; });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlation template matching with transitive elimination"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value file");

    unsigned long long seed = 1;
    std::string out;
    std::string format = "csv";
    app.add_option("--seed", seed, "Random seed for synthesis")->capture_default_str();
    app.add_option("--out", out, "Output path (defaults to stdout where applicable)");
    app.add_option("--format", format, "Report format for stdout: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // synth ------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "Generate a smoothed-noise corpus");
    tmatch::cli::SynthOptions synth_opts;
    std::vector<int> sizes{41};
    synth->add_option("--out-dir", synth_opts.out_dir, "Corpus directory")->required();
    synth->add_option("--rows", synth_opts.spec.image.rows, "Search image rows");
    synth->add_option("--cols", synth_opts.spec.image.cols, "Search image cols");
    synth->add_option("--count", synth_opts.spec.image_count, "Number of search images");
    synth->add_option("--sizes", sizes, "Template sizes (square)");
    synth->add_option("--per-size", synth_opts.spec.per_size, "Templates per size per image");
    synth->add_option("--smooth-sigma", synth_opts.spec.image.smooth_sigma,
                      "Gaussian smoothing sigma (0 = raw noise)");
    synth->add_option("--smooth-passes", synth_opts.spec.image.smooth_passes, "Smoothing passes");
    synth->add_option("--gain", synth_opts.spec.gain, "Photometric gain on templates");
    synth->add_option("--offset", synth_opts.spec.offset, "Photometric offset on templates");
    synth->add_option("--image-format", synth_opts.image_format, "pgm|png");

    // match ------------------------------------------------------------
    auto* match_cmd = app.add_subcommand("match", "Match a template against a search image");
    tmatch::cli::MatchOptions match_opts;
    std::string match_mode = "egs";
    std::string match_kernel = "default";
    double match_init = 0.0;
    bool match_has_init = false;
    match_cmd->add_option("-t,--template", match_opts.template_path, "Template image")->required();
    match_cmd->add_option("-i,--image", match_opts.image_path, "Search image")->required();
    match_cmd->add_option("--mode", match_mode, "brute|egs|opta")
        ->check(CLI::IsMember({"brute", "egs", "opta"}));
    add_engine_flags(match_cmd, match_opts.params, match_kernel, match_init, match_has_init);

    // egs ----------------------------------------------------------------
    auto* egs_cmd = app.add_subcommand("egs", "Group-size analysis of a search image");
    tmatch::cli::EgsOptions egs_opts;
    std::string egs_kernel = "default";
    double egs_init = 0.0;
    bool egs_has_init = false;
    egs_cmd->add_option("-i,--image", egs_opts.image_path, "Search image")->required();
    egs_cmd->add_option("--size", egs_opts.size_m, "Template window size (square)");
    egs_cmd->add_option("--size-n", egs_opts.size_n, "Template window width when not square");
    egs_cmd->add_option("-t,--template", egs_opts.template_path,
                        "Take the window size from this image");
    egs_cmd->add_option("--save-map", egs_opts.save_map_path,
                        "Cache the auto-correlation map to this file");
    add_engine_flags(egs_cmd, egs_opts.params, egs_kernel, egs_init, egs_has_init);

    // opta ---------------------------------------------------------------
    auto* opta_cmd = app.add_subcommand("opta", "Optimize auto-correlation by controlled blur");
    tmatch::cli::OptAOptions opta_opts;
    std::string opta_kernel = "default";
    double opta_init = 0.0;
    bool opta_has_init = false;
    opta_cmd->add_option("-i,--image", opta_opts.image_path, "Search image")->required();
    opta_cmd->add_option("--size", opta_opts.size_m, "Template window size (square)");
    opta_cmd->add_option("--size-n", opta_opts.size_n, "Template window width when not square");
    opta_cmd->add_option("-t,--template", opta_opts.template_path,
                         "Take the window size from this image");
    opta_cmd->add_option("--out-image", opta_opts.out_image_path, "Write the blurred image here");
    add_engine_flags(opta_cmd, opta_opts.params, opta_kernel, opta_init, opta_has_init);

    // bench --------------------------------------------------------------
    auto* bench_cmd = app.add_subcommand("bench", "Run a corpus benchmark sweep");
    tmatch::cli::BenchOptions bench_opts;
    std::string bench_kernel = "default";
    double bench_init = 0.0;
    bool bench_has_init = false;
    bench_cmd->add_option("--corpus", bench_opts.corpus_dir, "Corpus directory")->required();
    bench_cmd->add_option("--modes", bench_opts.modes, "Modes to run (brute egs opta)");
    bench_cmd->add_option("--out-csv", bench_opts.out_csv, "CSV report path");
    bench_cmd->add_option("--out-json", bench_opts.out_json, "JSON report path");
    bench_cmd->add_option("--tolerance", bench_opts.accuracy_tolerance,
                          "Accuracy tolerance in pixels");
    add_engine_flags(bench_cmd, bench_opts.params, bench_kernel, bench_init, bench_has_init);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*synth) {
            synth_opts.spec.seed = seed;
            synth_opts.spec.template_sizes = sizes;
            return tmatch::cli::cmd_synth(synth_opts);
        }
        if (*match_cmd) {
            match_opts.params.mode = match_mode == "brute"  ? tmatch::MatchMode::brute
                                     : match_mode == "opta" ? tmatch::MatchMode::opta
                                                            : tmatch::MatchMode::egs;
            match_opts.params.kernel = parse_kernel(match_kernel);
            if (match_has_init) match_opts.params.init_threshold = match_init;
            match_opts.out_path = out;
            return tmatch::cli::cmd_match(match_opts);
        }
        if (*egs_cmd) {
            egs_opts.params.kernel = parse_kernel(egs_kernel);
            egs_opts.out_path = out;
            return tmatch::cli::cmd_egs(egs_opts);
        }
        if (*opta_cmd) {
            opta_opts.params.kernel = parse_kernel(opta_kernel);
            opta_opts.out_path = out;
            return tmatch::cli::cmd_opta(opta_opts);
        }
        if (*bench_cmd) {
            bench_opts.params.kernel = parse_kernel(bench_kernel);
            if (bench_has_init) bench_opts.params.init_threshold = bench_init;
            bench_opts.stdout_format = format;
            return tmatch::cli::cmd_bench(bench_opts);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
