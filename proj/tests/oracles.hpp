// Test-only reference implementations, kept independent of the library's
// running-sum code paths: plain double loops and two-pass statistics.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "tmatch/image.hpp"

namespace oracle {

inline double naive_window_sum(const tmatch::Image& src, int r, int c, int m, int n) {
    double sum = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) sum += src(r + i, c + j);
    return sum;
}

struct NaiveStats {
    double mean = 0.0;
    double sigma = 0.0;  // zero-mean norm sqrt(sum (v - mean)^2)
};

inline NaiveStats naive_window_stats(const tmatch::Image& src, int r, int c, int m, int n) {
    NaiveStats s;
    s.mean = naive_window_sum(src, r, c, m, n) / (double(m) * n);
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            const double d = src(r + i, c + j) - s.mean;
            acc += d * d;
        }
    s.sigma = std::sqrt(acc);
    return s;
}

// Two-pass correlation straight from the defining formula. Returns 0 for
// windows whose zero-mean norm vanishes.
inline double naive_zncc(const tmatch::Image& a, int ar, int ac, const tmatch::Image& b, int br,
                         int bc, int m, int n) {
    const NaiveStats sa = naive_window_stats(a, ar, ac, m, n);
    const NaiveStats sb = naive_window_stats(b, br, bc, m, n);
    if (sa.sigma <= 1e-9 * double(m) * n || sb.sigma <= 1e-9 * double(m) * n) return 0.0;
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            acc += (a(ar + i, ac + j) - sa.mean) * (b(br + i, bc + j) - sb.mean);
    return acc / (sa.sigma * sb.sigma);
}

inline tmatch::Image random_image(int rows, int cols, std::mt19937_64& rng, double lo = 0.0,
                                  double hi = 255.0) {
    tmatch::Image img(rows, cols);
    std::uniform_real_distribution<double> uni(lo, hi);
    for (double& v : img.data()) v = uni(rng);
    return img;
}

// Integer-valued random image, matching what 8-bit loads produce.
inline tmatch::Image random_u8_image(int rows, int cols, std::mt19937_64& rng) {
    tmatch::Image img(rows, cols);
    std::uniform_int_distribution<int> uni(0, 255);
    for (double& v : img.data()) v = double(uni(rng));
    return img;
}

// Column ramp I(x,y) = y: horizontally shifted windows are affine-related.
inline tmatch::Image ramp_image(int rows, int cols) {
    tmatch::Image img(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) img(r, c) = double(c);
    return img;
}

}  // namespace oracle
