#include "tmatch/egs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tmatch/bounds.hpp"

namespace tmatch {

long long retained_count(const AutoCorrMap& map, double rho_tb) {
    if (rho_tb < 0.0 || rho_tb > 1.0)
        throw std::invalid_argument("retained_count: rho_tb must be in [0,1]");
    const double threshold = expected_elimination_threshold(rho_tb);
    const GroupGrid grid(map.rows, map.cols, map.group_h, map.group_w);

    long long count = 0;
    for (int r = 0; r < map.rows; ++r)
        for (int c = 0; c < map.cols; ++c) {
            if (grid.is_center(r, c)) continue;
            if (map.at(r, c) < threshold) ++count;
        }
    return count;
}

CostEstimate total_cost(int extent_rows, int extent_cols, int h, int w, long long n_r,
                        double amortized) {
    if (h < 1 || w < 1) throw std::invalid_argument("total_cost: group size must be >= 1");
    CostEstimate est;
    est.central = double((extent_rows + h - 1) / h) * double((extent_cols + w - 1) / w);
    est.retained = n_r;
    est.retained_cost = double(n_r);
    est.amortized = amortized;
    est.total = est.central + est.retained_cost + est.amortized;
    return est;
}

EGSResult efficient_group_size(const Image& I, int m, int n, const EgsParams& params,
                               const WindowStats& ws) {
    if (params.h0 < 1 || params.w0 < 1 || params.h0 % 2 == 0 || params.w0 % 2 == 0)
        throw std::invalid_argument("efficient_group_size: initial group size must be odd");
    if (params.rho_tb <= 0.0 || params.rho_tb >= 1.0)
        throw std::invalid_argument("efficient_group_size: rho_tb must be in (0,1)");

    const int er = I.rows() - m + 1;
    const int ec = I.cols() - n + 1;
    if (er < 1 || ec < 1)
        throw std::invalid_argument("efficient_group_size: template does not fit");

    const double extent = double(er) * double(ec);
    const double mn = double(m) * double(n);

    int cap = params.max_group > 0 ? params.max_group : std::numeric_limits<int>::max();
    if (cap % 2 == 0) ++cap;

    EGSResult best;
    double prev_cost = std::numeric_limits<double>::infinity();
    int h = params.h0, w = params.w0;

    while (true) {
        GroupGrid grid(er, ec, h, w);
        AutoCorrMap map = local_autocorrelation(I, m, n, grid, ws);
        const long long n_r = retained_count(map, params.rho_tb);
        const double amortized = params.include_autocorr_cost
                                     ? (double(h) * w - 1.0) * extent /
                                           (mn * std::max(1, params.n_templates))
                                     : 0.0;
        const CostEstimate cost = total_cost(er, ec, h, w, n_r, amortized);

        // First iteration is unconditional; afterwards growth must have paid
        // off by more than the xi margin.
        const bool accepted = !std::isfinite(prev_cost) ||
                              prev_cost - cost.total > params.xi_fraction * prev_cost;
        if (!accepted) break;

        best.h = h;
        best.w = w;
        best.grid = std::move(grid);
        best.map = std::move(map);
        best.cost = cost;
        best.trace.push_back(EgsIteration{h, w, cost});
        prev_cost = cost.total;

        // Growing past the extent (or the cap) cannot change the tiling.
        if ((h >= er && w >= ec) || (h >= cap && w >= cap)) break;
        h = std::min(h + 2, cap);
        w = std::min(w + 2, cap);
    }
    return best;
}

EGSResult efficient_group_size(const Image& I, int m, int n, const EgsParams& params) {
    return efficient_group_size(I, m, n, params, window_stats(I, m, n));
}

}  // namespace tmatch
