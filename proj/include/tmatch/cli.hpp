// Command implementations behind the tmatch executable. The binary parses
// flags into these option structs; keeping the logic here lets tests drive
// the commands directly.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tmatch/matcher.hpp"
#include "tmatch/synth.hpp"

namespace tmatch::cli {

struct SynthOptions {
    CorpusSpec spec;
    std::string out_dir;
    std::string image_format = "pgm";  // pgm | png
};

// Writes search images, template patches, and manifest.json with the
// ground-truth locations. Returns process exit code.
int cmd_synth(const SynthOptions& opts);

struct MatchOptions {
    std::string template_path;
    std::string image_path;
    MatchParams params;
    std::string out_path;  // empty: print JSON to stdout
};

// Exit codes: 0 matched, 2 best fell below the user threshold, 1 error.
int cmd_match(const MatchOptions& opts);

struct EgsOptions {
    std::string image_path;
    int size_m = 0;  // template window size; taken from --template when 0
    int size_n = 0;
    std::string template_path;
    MatchParams params;
    std::string out_path;
    std::string save_map_path;  // optional binary auto-correlation cache
};

int cmd_egs(const EgsOptions& opts);

struct OptAOptions {
    std::string image_path;
    int size_m = 0;
    int size_n = 0;
    std::string template_path;
    MatchParams params;
    std::string out_image_path;  // optimized blurred image
    std::string out_path;        // JSON sidecar; empty: stdout
};

int cmd_opta(const OptAOptions& opts);

struct BenchOptions {
    std::string corpus_dir;  // directory containing manifest.json from cmd_synth
    std::vector<std::string> modes{"brute", "egs"};
    MatchParams params;
    std::string out_csv;   // empty: <corpus_dir>/bench.csv
    std::string out_json;  // empty: <corpus_dir>/bench.json
    int accuracy_tolerance = 4;  // |d_row|,|d_col| <= tolerance counts as correct
    std::string stdout_format = "csv";  // csv | json
    bool quiet = false;
};

// Per (template size, mode): mean wall time, elimination %, accuracy against
// the stored ground truth, and mean operation count.
int cmd_bench(const BenchOptions& opts);

}  // namespace tmatch::cli
