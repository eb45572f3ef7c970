// Cost model for the transitive search and the iterative efficient
// group-size optimization.
#pragma once

#include <vector>

#include "tmatch/autocorr.hpp"
#include "tmatch/image.hpp"

namespace tmatch {

// Costs in units of one full window-correlation evaluation (c_rho = 1).
struct CostEstimate {
    double central = 0.0;     // c_c: one evaluation per group (true tiling count)
    long long retained = 0;   // n_r
    double retained_cost = 0; // c_r = n_r
    double amortized = 0.0;   // c_a / n_t, 0 when excluded
    double total = 0.0;       // c_t
};

// Member locations (centers excluded) whose auto-correlation falls strictly
// below sqrt(1 - rho_tb^2); the boundary counts as eliminated.
long long retained_count(const AutoCorrMap& map, double rho_tb);

CostEstimate total_cost(int extent_rows, int extent_cols, int h, int w, long long n_r,
                        double amortized = 0.0);

struct EgsParams {
    int h0 = 3;
    int w0 = 3;
    double rho_tb = 0.8;        // threshold used by the retained-count estimate
    double xi_fraction = 0.005; // growth continues while improvement > xi_fraction * previous cost
    bool include_autocorr_cost = false;  // amortized c_a / n_templates term
    int n_templates = 1;
    // Safety cap on group growth; 0 means "up to the extent size".
    int max_group = 127;
};

struct EgsIteration {
    int h = 0;
    int w = 0;
    CostEstimate cost;
};

struct EGSResult {
    int h = 0;  // (h_e, w_e)
    int w = 0;
    GroupGrid grid;
    AutoCorrMap map;
    CostEstimate cost;
    std::vector<EgsIteration> trace;  // accepted iterations only, cost strictly decreasing
};

// Grows the group size from (h0, w0) in steps of +2 while the estimated
// total cost keeps improving by more than xi_fraction of the previous cost;
// the first iteration is always accepted.
EGSResult efficient_group_size(const Image& I, int m, int n, const EgsParams& params);
EGSResult efficient_group_size(const Image& I, int m, int n, const EgsParams& params,
                               const WindowStats& ws);

}  // namespace tmatch
