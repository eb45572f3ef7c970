// Match result records shared by the brute-force reference and the
// transitive search engine.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tmatch {

enum class MatchMode { brute, egs, opta };

std::string to_string(MatchMode mode);

// Per-location outcome of a search, recorded when requested by tests and
// diagnostics. Values of the Visit enum are stored in MatchResult::visits.
enum Visit : uint8_t {
    kVisitCenter = 0,     // evaluated as a group center (scan 1)
    kVisitEliminated = 1, // skipped via the transitive bound
    kVisitRetained = 2,   // member evaluated in scan 2
};

struct MatchStats {
    long long centers = 0;
    long long eliminated = 0;
    long long retained = 0;
    double elim_pct = 0.0;  // eliminated / extent * 100
    long long ops = 0;      // full correlation evaluations performed
    double wall_ms = 0.0;
};

struct MatchResult {
    MatchMode mode = MatchMode::brute;

    int best_row = 0;
    int best_col = 0;
    double best_rho = 0.0;
    bool best_degenerate = false;  // best came from flat windows only

    // Post-refinement location (equals best for brute/egs).
    int refined_row = 0;
    int refined_col = 0;
    double refined_rho = 0.0;

    // Set when a user threshold was given and the best found falls below it.
    bool below_threshold = false;

    // Final value of the running threshold after scan 2 (equals best
    // non-degenerate rho unless a user threshold exceeded it).
    double final_threshold = 0.0;

    MatchStats stats;

    // Optional diagnostics, filled on request.
    std::vector<uint8_t> visits;   // extent-sized Visit codes
    std::vector<double> surface;   // extent-sized correlation surface (brute)

    int extent_rows = 0;
    int extent_cols = 0;
};

}  // namespace tmatch
