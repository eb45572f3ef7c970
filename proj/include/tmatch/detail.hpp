// Shared low-level evaluation helpers. Every matcher (brute, transitive,
// refinement) funnels per-location correlation through zncc_at so the modes
// produce bit-identical values at the same location.
#pragma once

#include <algorithm>
#include <cmath>

#include "tmatch/image.hpp"
#include "tmatch/stats.hpp"

namespace tmatch::detail {

// A window counts as flat when its zero-mean energy is indistinguishable
// from accumulated rounding noise: below the absolute floor 1e-9*mn or below
// a data-dependent fraction of the window's raw energy (direct accumulation
// over mn terms rounds at ~mn*eps relative to that energy).
inline bool variance_is_flat(double var_sum, double q_sum, long long mn) {
    const double abs_tol = 1e-9 * double(mn);
    const double rel = std::max(1e-13, 4.0 * 2.220446049250313e-16 * double(mn));
    return var_sum <= std::max(abs_tol * abs_tol, rel * q_sum);
}

struct TemplateStats {
    double mu = 0.0;
    double omega = 0.0;
    bool flat = true;
};

TemplateStats template_stats(const Image& t);

inline double window_dot(const Image& t, const Image& I, int r, int c) {
    const int m = t.rows(), n = t.cols();
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
        const double* pt = t.row(i);
        const double* pi = I.row(r + i) + c;
        for (int j = 0; j < n; ++j) acc += pt[j] * pi[j];
    }
    return acc;
}

// Correlation of template t against the window of I whose top-left corner is
// (r, c), using precomputed statistics. Flat windows yield 0.
inline double zncc_at(const Image& t, const TemplateStats& ts, const Image& I,
                      const WindowStats& ws, int r, int c) {
    if (ts.flat || ws.flat(r, c)) return 0.0;
    const double mn = double(t.rows()) * double(t.cols());
    const double num = window_dot(t, I, r, c) - mn * ts.mu * ws.mu(r, c);
    return std::clamp(num / (ts.omega * ws.omega(r, c)), -1.0, 1.0);
}

}  // namespace tmatch::detail
