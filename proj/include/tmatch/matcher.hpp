// End-to-end transitive search: two-scan threshold bootstrap, per-group
// elimination via the sufficient elimination condition, retained-location
// evaluation, and second-stage localization refinement for blurred search.
#pragma once

#include <optional>

#include "tmatch/autocorr.hpp"
#include "tmatch/blur.hpp"
#include "tmatch/egs.hpp"
#include "tmatch/image.hpp"
#include "tmatch/result.hpp"
#include "tmatch/stats.hpp"

namespace tmatch {

struct CenterScan {
    std::vector<double> rho;         // one entry per group, in grid order
    std::vector<uint8_t> degenerate; // flat center or flat template
    BestCell best;                   // max over centers (degeneracy-aware)
};

// Scan 1: evaluate the template at every group center.
CenterScan center_scan(const Image& t, const Image& I, const GroupGrid& grid);

struct SearchOptions {
    std::optional<double> init_threshold;  // user-supplied starting threshold
    bool parallel = false;  // freeze the threshold after scan 1 and partition groups
    int threads = 2;
    bool record_visits = false;
};

// Scan 1 + scan 2 with transitive elimination. The running threshold starts
// at max(scan-1 maximum, init_threshold) and tightens as better members are
// found (reference mode). Flat members or members of flat centers are never
// eliminated by the bound; they are evaluated and carry the degenerate 0.
MatchResult transitive_search(const Image& t, const Image& I, const AutoCorrMap& map,
                              const GroupGrid& grid, const SearchOptions& opts = {});

// Exhaustive correlation against the ORIGINAL image over the (2d+1) x (2d+1)
// neighborhood of loc, clipped to the extent. Returns the argmax cell.
BestCell refine_localization(const Image& t, const Image& I_original, int loc_row, int loc_col,
                             int d);

struct MatchParams {
    MatchMode mode = MatchMode::egs;
    double rho_th = 0.8;    // cost-estimation threshold; also OptA's detection threshold
    double rho_max = 0.95;  // OptA quality parameter
    std::optional<double> init_threshold;  // user threshold for the search itself
    double xi_fraction = 0.005;
    int h0 = 3;
    int w0 = 3;
    BlurKernel kernel = BlurKernel::default_profile();
    double opta_margin = 0.005;
    bool parallel = false;
    int threads = 2;
    bool record_visits = false;
};

// Precomputed per-(image, template-size) state, reusable across templates.
struct PreparedEgs {
    EGSResult egs;
    WindowStats ws;  // of I
};
struct PreparedOptA {
    OptAResult opta;
    WindowStats ws_blur;  // of the optimized image
    WindowStats ws_orig;  // of the original, for refinement
};

PreparedEgs prepare_egs(const Image& I, int m, int n, const MatchParams& params);
PreparedOptA prepare_opta(const Image& I, int m, int n, const MatchParams& params);

MatchResult run_egs(const Image& t, const Image& I, const PreparedEgs& prep,
                    const MatchParams& params);
MatchResult run_opta(const Image& t, const Image& I_original, const PreparedOptA& prep,
                     const MatchParams& params);

// One-shot entry point covering all three modes.
MatchResult match(const Image& t, const Image& I, const MatchParams& params);

}  // namespace tmatch
