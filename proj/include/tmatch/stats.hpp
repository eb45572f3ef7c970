// Running-sum tables, windowed statistics, the correlation coefficient, and
// the exhaustive reference matcher.
#pragma once

#include <cstdint>

#include "tmatch/image.hpp"
#include "tmatch/result.hpp"

namespace tmatch {

// Sum of every m x n window of a source array, indexed by the window's
// top-left corner. Built from a zero-padded 2-D prefix table so each entry
// costs four reads.
struct SumTable {
    int win_rows = 0;  // m
    int win_cols = 0;  // n
    int rows = 0;      // p - m + 1
    int cols = 0;      // q - n + 1
    std::vector<double> sums;

    double at(int r, int c) const { return sums[std::size_t(r) * cols + c]; }
};

SumTable running_sum(const Image& src, int m, int n);

// Instrumentation: number of running_sum calls since the last reset. Used by
// tests that pin the per-group-size table-construction count.
std::uint64_t running_sum_call_count();
void reset_running_sum_call_count();

// Per-window mean and zero-mean norm over the valid extent of an image.
// flat(r,c) marks windows whose variance is indistinguishable from zero;
// correlations involving them take the degenerate value 0.
struct WindowStats {
    int win_rows = 0;
    int win_cols = 0;
    int rows = 0;
    int cols = 0;
    std::vector<double> mean;      // mu
    std::vector<double> norm;      // Omega = sqrt(sum (v - mu)^2)
    std::vector<uint8_t> flat_map;

    double mu(int r, int c) const { return mean[std::size_t(r) * cols + c]; }
    double omega(int r, int c) const { return norm[std::size_t(r) * cols + c]; }
    bool flat(int r, int c) const { return flat_map[std::size_t(r) * cols + c] != 0; }
};

WindowStats window_stats(const Image& img, int m, int n);

// Correlation coefficient between two m x n windows, clamped to [-1,1].
// Flat windows (zero variance) yield 0.
double zncc(const Image& a, int ar, int ac, const Image& b, int br, int bc, int m, int n);

// Whole-image convenience overload; shapes must match.
double zncc(const Image& a, const Image& b);

struct BruteOptions {
    bool record_surface = false;
    bool record_visits = false;
    int threads = 1;  // rows are partitioned across workers; result is order-independent
};

// Evaluates the correlation at every valid location and returns the argmax.
// Ties break to the smallest (row, col); degenerate (flat-window) locations
// are only reported when no non-degenerate location exists.
MatchResult brute_force_match(const Image& t, const Image& I, const BruteOptions& opts = {});

// Ordering used by every matcher to pick the reported best: non-degenerate
// beats degenerate, then larger rho, then smaller (row, col).
struct BestCell {
    int row = -1;
    int col = -1;
    double rho = 0.0;
    bool degenerate = true;
    bool valid = false;
};

bool better_candidate(const BestCell& cand, const BestCell& incumbent);

}  // namespace tmatch
