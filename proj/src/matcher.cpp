#include "tmatch/matcher.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "tmatch/bounds.hpp"
#include "tmatch/detail.hpp"

namespace tmatch {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

CenterScan center_scan_impl(const Image& t, const detail::TemplateStats& ts, const Image& I,
                            const WindowStats& ws, const GroupGrid& grid) {
    CenterScan scan;
    scan.rho.reserve(grid.groups().size());
    scan.degenerate.reserve(grid.groups().size());
    for (const Group& g : grid.groups()) {
        const double rho = detail::zncc_at(t, ts, I, ws, g.center_row, g.center_col);
        const bool degenerate = ts.flat || ws.flat(g.center_row, g.center_col);
        scan.rho.push_back(rho);
        scan.degenerate.push_back(degenerate ? 1 : 0);
        const BestCell cand{g.center_row, g.center_col, rho, degenerate, true};
        if (better_candidate(cand, scan.best)) scan.best = cand;
    }
    return scan;
}

struct ScanTally {
    BestCell best;
    double threshold = -std::numeric_limits<double>::infinity();
    long long eliminated = 0;
    long long retained = 0;
};

// Scan 2 over a contiguous range of groups. With a frozen threshold this is
// safe to run concurrently on disjoint ranges.
void scan_members(const Image& t, const detail::TemplateStats& ts, const Image& I,
                  const WindowStats& ws, const AutoCorrMap& map, const GroupGrid& grid,
                  const CenterScan& centers, std::size_t g0, std::size_t g1, bool running_update,
                  double frozen_threshold, std::vector<uint8_t>* visits, ScanTally& tally) {
    tally.threshold = frozen_threshold;
    for (std::size_t gi = g0; gi < g1; ++gi) {
        const Group& g = grid.groups()[gi];
        const double rho_tc = centers.rho[gi];
        const bool center_degenerate = centers.degenerate[gi] != 0;
        for (int r = g.r0; r <= g.r1; ++r) {
            for (int c = g.c0; c <= g.c1; ++c) {
                if (r == g.center_row && c == g.center_col) continue;
                const bool member_flat = ts.flat || ws.flat(r, c);
                if (!center_degenerate && !member_flat &&
                    tally.threshold >= -1.0 &&
                    sec_holds(std::min(tally.threshold, 1.0), rho_tc, map.at(r, c))) {
                    ++tally.eliminated;
                    if (visits) (*visits)[std::size_t(r) * map.cols + c] = kVisitEliminated;
                    continue;
                }
                const double rho = detail::zncc_at(t, ts, I, ws, r, c);
                ++tally.retained;
                if (visits) (*visits)[std::size_t(r) * map.cols + c] = kVisitRetained;
                const BestCell cand{r, c, rho, member_flat, true};
                if (better_candidate(cand, tally.best)) tally.best = cand;
                if (running_update && !member_flat && rho > tally.threshold)
                    tally.threshold = rho;
            }
        }
    }
}

BestCell refine_impl(const Image& t, const detail::TemplateStats& ts, const Image& I,
                     const WindowStats& ws, int loc_row, int loc_col, int d, long long& ops) {
    const int r0 = std::max(0, loc_row - d), r1 = std::min(ws.rows - 1, loc_row + d);
    const int c0 = std::max(0, loc_col - d), c1 = std::min(ws.cols - 1, loc_col + d);
    BestCell best;
    for (int r = r0; r <= r1; ++r)
        for (int c = c0; c <= c1; ++c) {
            const double rho = detail::zncc_at(t, ts, I, ws, r, c);
            ++ops;
            const BestCell cand{r, c, rho, ts.flat || ws.flat(r, c), true};
            if (better_candidate(cand, best)) best = cand;
        }
    return best;
}

MatchResult transitive_search_impl(const Image& t, const Image& I, const AutoCorrMap& map,
                                   const GroupGrid& grid, const WindowStats& ws,
                                   const SearchOptions& opts) {
    const detail::TemplateStats ts = detail::template_stats(t);
    if (ts.flat)
        throw std::invalid_argument("transitive_search: constant template has no defined correlation");
    if (map.rows != grid.extent_rows() || map.cols != grid.extent_cols() ||
        map.group_h != grid.group_h() || map.group_w != grid.group_w() ||
        ws.rows != map.rows || ws.cols != map.cols)
        throw std::invalid_argument("transitive_search: grid/map mismatch");
    if (opts.init_threshold && std::abs(*opts.init_threshold) > 1.0 + 1e-9)
        throw std::invalid_argument("transitive_search: init threshold out of [-1,1]");

    const auto start = Clock::now();
    MatchResult result;
    result.mode = MatchMode::egs;
    result.extent_rows = map.rows;
    result.extent_cols = map.cols;
    if (opts.record_visits)
        result.visits.assign(std::size_t(map.rows) * map.cols, kVisitCenter);

    const CenterScan centers = center_scan_impl(t, ts, I, ws, grid);
    long long ops = (long long)centers.rho.size();

    // Threshold: the best non-degenerate central correlation, raised to the
    // user threshold when one was supplied.
    double rho_tb = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centers.rho.size(); ++i)
        if (!centers.degenerate[i]) rho_tb = std::max(rho_tb, centers.rho[i]);
    if (opts.init_threshold)
        rho_tb = std::max(rho_tb, std::clamp(*opts.init_threshold, -1.0, 1.0));

    const std::size_t n_groups = grid.groups().size();
    std::vector<ScanTally> tallies;
    if (opts.parallel && opts.threads > 1 && n_groups > 1) {
        const int workers = int(std::min<std::size_t>(std::size_t(opts.threads), n_groups));
        tallies.resize(workers);
        std::vector<std::thread> pool;
        const std::size_t chunk = (n_groups + workers - 1) / workers;
        for (int k = 0; k < workers; ++k) {
            const std::size_t g0 = k * chunk;
            const std::size_t g1 = std::min(n_groups, g0 + chunk);
            pool.emplace_back(scan_members, std::cref(t), std::cref(ts), std::cref(I),
                              std::cref(ws), std::cref(map), std::cref(grid), std::cref(centers),
                              g0, g1, false, rho_tb,
                              opts.record_visits ? &result.visits : nullptr,
                              std::ref(tallies[k]));
        }
        for (auto& th : pool) th.join();
    } else {
        tallies.resize(1);
        scan_members(t, ts, I, ws, map, grid, centers, 0, n_groups, true, rho_tb,
                     opts.record_visits ? &result.visits : nullptr, tallies[0]);
    }

    BestCell best = centers.best;
    double final_threshold = rho_tb;
    for (const ScanTally& tally : tallies) {
        if (better_candidate(tally.best, best)) best = tally.best;
        final_threshold = std::max(final_threshold, tally.threshold);
        result.stats.eliminated += tally.eliminated;
        result.stats.retained += tally.retained;
        ops += tally.retained;
    }

    result.best_row = best.row;
    result.best_col = best.col;
    result.best_rho = best.rho;
    result.best_degenerate = best.degenerate;
    result.refined_row = best.row;
    result.refined_col = best.col;
    result.refined_rho = best.rho;
    result.final_threshold = std::isfinite(final_threshold) ? final_threshold : 0.0;
    result.below_threshold =
        opts.init_threshold && (best.degenerate || best.rho < *opts.init_threshold);

    result.stats.centers = (long long)n_groups;
    const double extent = double(map.rows) * double(map.cols);
    result.stats.elim_pct = 100.0 * double(result.stats.eliminated) / extent;
    result.stats.ops = ops;
    result.stats.wall_ms = ms_since(start);
    return result;
}

}  // namespace

CenterScan center_scan(const Image& t, const Image& I, const GroupGrid& grid) {
    const detail::TemplateStats ts = detail::template_stats(t);
    const WindowStats ws = window_stats(I, t.rows(), t.cols());
    if (ws.rows != grid.extent_rows() || ws.cols != grid.extent_cols())
        throw std::invalid_argument("center_scan: grid extent mismatch");
    return center_scan_impl(t, ts, I, ws, grid);
}

MatchResult transitive_search(const Image& t, const Image& I, const AutoCorrMap& map,
                              const GroupGrid& grid, const SearchOptions& opts) {
    return transitive_search_impl(t, I, map, grid, window_stats(I, t.rows(), t.cols()), opts);
}

BestCell refine_localization(const Image& t, const Image& I_original, int loc_row, int loc_col,
                             int d) {
    if (d < 0) throw std::invalid_argument("refine_localization: d must be >= 0");
    const detail::TemplateStats ts = detail::template_stats(t);
    const WindowStats ws = window_stats(I_original, t.rows(), t.cols());
    if (loc_row < 0 || loc_row >= ws.rows || loc_col < 0 || loc_col >= ws.cols)
        throw std::invalid_argument("refine_localization: location outside the extent");
    long long ops = 0;
    return refine_impl(t, ts, I_original, ws, loc_row, loc_col, d, ops);
}

PreparedEgs prepare_egs(const Image& I, int m, int n, const MatchParams& params) {
    EgsParams egs;
    egs.h0 = params.h0;
    egs.w0 = params.w0;
    egs.rho_tb = params.rho_th;
    egs.xi_fraction = params.xi_fraction;
    PreparedEgs prep;
    prep.ws = window_stats(I, m, n);
    prep.egs = efficient_group_size(I, m, n, egs, prep.ws);
    return prep;
}

PreparedOptA prepare_opta(const Image& I, int m, int n, const MatchParams& params) {
    OptAParams opta;
    opta.rho_th = params.rho_th;
    opta.rho_max = params.rho_max;
    opta.kernel = params.kernel;
    opta.margin = params.opta_margin;
    opta.egs.h0 = params.h0;
    opta.egs.w0 = params.w0;
    opta.egs.rho_tb = params.rho_th;
    opta.egs.xi_fraction = params.xi_fraction;

    PreparedOptA prep;
    prep.opta = optimize_autocorrelation(I, m, n, opta);
    prep.ws_blur = window_stats(prep.opta.image, m, n);
    prep.ws_orig = window_stats(I, m, n);
    return prep;
}

MatchResult run_egs(const Image& t, const Image& I, const PreparedEgs& prep,
                    const MatchParams& params) {
    SearchOptions opts;
    opts.init_threshold = params.init_threshold;
    opts.parallel = params.parallel;
    opts.threads = params.threads;
    opts.record_visits = params.record_visits;
    MatchResult result =
        transitive_search_impl(t, I, prep.egs.map, prep.egs.grid, prep.ws, opts);
    result.mode = MatchMode::egs;
    return result;
}

MatchResult run_opta(const Image& t, const Image& I_original, const PreparedOptA& prep,
                     const MatchParams& params) {
    const auto start = Clock::now();
    SearchOptions opts;
    opts.init_threshold = params.init_threshold;
    opts.parallel = params.parallel;
    opts.threads = params.threads;
    opts.record_visits = params.record_visits;

    MatchResult result = transitive_search_impl(t, prep.opta.image, prep.opta.egs.map,
                                                prep.opta.egs.grid, prep.ws_blur, opts);
    result.mode = MatchMode::opta;

    // The optimized image carries kappa applications of the kernel, so the
    // localization drift is bounded by that accumulated support.
    const int d = prep.opta.kappa * params.kernel.radius;
    const detail::TemplateStats ts = detail::template_stats(t);
    long long refine_ops = 0;
    const BestCell refined = refine_impl(t, ts, I_original, prep.ws_orig, result.best_row,
                                         result.best_col, d, refine_ops);
    result.refined_row = refined.row;
    result.refined_col = refined.col;
    result.refined_rho = refined.rho;
    result.stats.ops += refine_ops;
    if (params.init_threshold)
        result.below_threshold = refined.degenerate || refined.rho < *params.init_threshold;
    result.stats.wall_ms = ms_since(start);
    return result;
}

MatchResult match(const Image& t, const Image& I, const MatchParams& params) {
    if (t.rows() > I.rows() || t.cols() > I.cols())
        throw std::invalid_argument("match: template larger than search image");
    if (params.mode != MatchMode::brute && detail::template_stats(t).flat)
        throw std::invalid_argument("match: constant template has no defined correlation");

    const auto start = Clock::now();
    MatchResult result;
    switch (params.mode) {
        case MatchMode::brute: {
            BruteOptions opts;
            opts.record_visits = params.record_visits;
            opts.threads = params.parallel ? params.threads : 1;
            result = brute_force_match(t, I, opts);
            break;
        }
        case MatchMode::egs: {
            const PreparedEgs prep = prepare_egs(I, t.rows(), t.cols(), params);
            result = run_egs(t, I, prep, params);
            break;
        }
        case MatchMode::opta: {
            const PreparedOptA prep = prepare_opta(I, t.rows(), t.cols(), params);
            result = run_opta(t, I, prep, params);
            break;
        }
    }
    result.stats.wall_ms = ms_since(start);
    return result;
}

}  // namespace tmatch
