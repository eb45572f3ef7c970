#include "tmatch/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "tmatch/detail.hpp"

namespace tmatch {

namespace {
std::atomic<std::uint64_t> g_running_sum_calls{0};
}

std::uint64_t running_sum_call_count() { return g_running_sum_calls.load(); }
void reset_running_sum_call_count() { g_running_sum_calls.store(0); }

SumTable running_sum(const Image& src, int m, int n) {
    const int p = src.rows(), q = src.cols();
    if (m < 1 || n < 1 || m > p || n > q)
        throw std::invalid_argument("running_sum: window does not fit the source");
    g_running_sum_calls.fetch_add(1, std::memory_order_relaxed);

    // Prefix table with a zero row/column so any window sum is four reads.
    std::vector<double> prefix(std::size_t(p + 1) * (q + 1), 0.0);
    const std::size_t pw = std::size_t(q) + 1;
    for (int r = 0; r < p; ++r) {
        const double* srow = src.row(r);
        double row_acc = 0.0;
        double* prev = prefix.data() + std::size_t(r) * pw;
        double* cur = prefix.data() + std::size_t(r + 1) * pw;
        for (int c = 0; c < q; ++c) {
            row_acc += srow[c];
            cur[c + 1] = prev[c + 1] + row_acc;
        }
    }

    SumTable table;
    table.win_rows = m;
    table.win_cols = n;
    table.rows = p - m + 1;
    table.cols = q - n + 1;
    table.sums.resize(std::size_t(table.rows) * table.cols);
    for (int r = 0; r < table.rows; ++r) {
        const double* top = prefix.data() + std::size_t(r) * pw;
        const double* bot = prefix.data() + std::size_t(r + m) * pw;
        double* out = table.sums.data() + std::size_t(r) * table.cols;
        for (int c = 0; c < table.cols; ++c)
            out[c] = bot[c + n] - top[c + n] - bot[c] + top[c];
    }
    return table;
}

WindowStats window_stats(const Image& img, int m, int n) {
    const SumTable s = running_sum(img, m, n);

    Image squared(img.rows(), img.cols());
    for (std::size_t i = 0; i < img.size(); ++i)
        squared.data()[i] = img.data()[i] * img.data()[i];
    const SumTable q = running_sum(squared, m, n);

    WindowStats ws;
    ws.win_rows = m;
    ws.win_cols = n;
    ws.rows = s.rows;
    ws.cols = s.cols;
    const std::size_t count = std::size_t(ws.rows) * ws.cols;
    ws.mean.resize(count);
    ws.norm.resize(count);
    ws.flat_map.resize(count);

    const double inv_mn = 1.0 / (double(m) * double(n));
    const long long mn = (long long)m * n;

    // Window sums come from prefix-table differences, whose rounding scales
    // with the whole-table magnitude; treat variances below that noise as 0.
    double q_total = 0.0;
    for (double v : squared.data()) q_total += v;
    const double prefix_noise =
        double(img.rows() + img.cols()) * 2.220446049250313e-16 * q_total;

    for (std::size_t i = 0; i < count; ++i) {
        const double sum = s.sums[i];
        const double sq = q.sums[i];
        const double var_sum = sq - sum * sum * inv_mn;
        const bool flat =
            detail::variance_is_flat(var_sum, sq, mn) || var_sum <= prefix_noise;
        ws.mean[i] = sum * inv_mn;
        ws.norm[i] = flat ? 0.0 : std::sqrt(std::max(0.0, var_sum));
        ws.flat_map[i] = flat ? 1 : 0;
    }
    return ws;
}

namespace detail {

TemplateStats template_stats(const Image& t) {
    double sum = 0.0, sq = 0.0;
    for (double v : t.data()) {
        sum += v;
        sq += v * v;
    }
    const long long mn = (long long)t.rows() * t.cols();
    const double var_sum = sq - sum * sum / double(mn);
    TemplateStats ts;
    ts.mu = sum / double(mn);
    ts.omega = std::sqrt(std::max(0.0, var_sum));
    ts.flat = variance_is_flat(var_sum, sq, mn);
    return ts;
}

}  // namespace detail

double zncc(const Image& a, int ar, int ac, const Image& b, int br, int bc, int m, int n) {
    if (ar < 0 || ac < 0 || br < 0 || bc < 0 || ar + m > a.rows() || ac + n > a.cols() ||
        br + m > b.rows() || bc + n > b.cols())
        throw std::invalid_argument("zncc: window out of bounds");

    double sa = 0.0, sb = 0.0, qa = 0.0, qb = 0.0, sab = 0.0;
    for (int i = 0; i < m; ++i) {
        const double* pa = a.row(ar + i) + ac;
        const double* pb = b.row(br + i) + bc;
        for (int j = 0; j < n; ++j) {
            sa += pa[j];
            sb += pb[j];
            qa += pa[j] * pa[j];
            qb += pb[j] * pb[j];
            sab += pa[j] * pb[j];
        }
    }
    const long long mn = (long long)m * n;
    const double var_a = qa - sa * sa / double(mn);
    const double var_b = qb - sb * sb / double(mn);
    if (detail::variance_is_flat(var_a, qa, mn) || detail::variance_is_flat(var_b, qb, mn))
        return 0.0;
    const double num = sab - sa * sb / double(mn);
    const double rho = num / (std::sqrt(var_a) * std::sqrt(var_b));
    return std::clamp(rho, -1.0, 1.0);
}

double zncc(const Image& a, const Image& b) {
    if (!a.same_size(b)) throw std::invalid_argument("zncc: shape mismatch");
    return zncc(a, 0, 0, b, 0, 0, a.rows(), a.cols());
}

bool better_candidate(const BestCell& cand, const BestCell& incumbent) {
    if (!cand.valid) return false;
    if (!incumbent.valid) return true;
    if (cand.degenerate != incumbent.degenerate) return !cand.degenerate;
    if (cand.rho != incumbent.rho) return cand.rho > incumbent.rho;
    if (cand.row != incumbent.row) return cand.row < incumbent.row;
    return cand.col < incumbent.col;
}

MatchResult brute_force_match(const Image& t, const Image& I, const BruteOptions& opts) {
    const int m = t.rows(), n = t.cols();
    if (m > I.rows() || n > I.cols())
        throw std::invalid_argument("brute_force_match: template larger than search image");

    const WindowStats ws = window_stats(I, m, n);
    const detail::TemplateStats ts = detail::template_stats(t);
    const int er = ws.rows, ec = ws.cols;

    MatchResult result;
    result.mode = MatchMode::brute;
    result.extent_rows = er;
    result.extent_cols = ec;
    if (opts.record_surface) result.surface.resize(std::size_t(er) * ec);
    if (opts.record_visits) result.visits.assign(std::size_t(er) * ec, kVisitRetained);

    const int threads = std::clamp(opts.threads, 1, er);
    std::vector<BestCell> bests(threads);

    auto scan_rows = [&](int r0, int r1, BestCell& best) {
        for (int r = r0; r < r1; ++r) {
            for (int c = 0; c < ec; ++c) {
                const double rho = detail::zncc_at(t, ts, I, ws, r, c);
                if (opts.record_surface) result.surface[std::size_t(r) * ec + c] = rho;
                BestCell cand{r, c, rho, ts.flat || ws.flat(r, c), true};
                if (better_candidate(cand, best)) best = cand;
            }
        }
    };

    if (threads == 1) {
        scan_rows(0, er, bests[0]);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (er + threads - 1) / threads;
        for (int k = 0; k < threads; ++k)
            pool.emplace_back(scan_rows, k * chunk, std::min(er, (k + 1) * chunk),
                              std::ref(bests[k]));
        for (auto& th : pool) th.join();
    }

    BestCell best;
    for (const BestCell& b : bests)
        if (better_candidate(b, best)) best = b;

    result.best_row = best.row;
    result.best_col = best.col;
    result.best_rho = best.rho;
    result.best_degenerate = best.degenerate;
    result.refined_row = best.row;
    result.refined_col = best.col;
    result.refined_rho = best.rho;
    result.final_threshold = best.degenerate ? 0.0 : best.rho;
    result.stats.retained = (long long)er * ec;
    result.stats.ops = (long long)er * ec;
    result.stats.elim_pct = 0.0;
    return result;
}

std::string to_string(MatchMode mode) {
    switch (mode) {
        case MatchMode::brute: return "brute";
        case MatchMode::egs: return "egs";
        case MatchMode::opta: return "opta";
    }
    return "unknown";
}

}  // namespace tmatch
