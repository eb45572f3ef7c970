// Transitive correlation bound algebra: interval bounds on an unknown
// correlation from two known ones, the sufficient elimination condition, and
// the elimination thresholds used for cost estimation.
#pragma once

namespace tmatch {

struct BoundPair {
    double lower;
    double upper;
};

// Interval for rho(t, r_o) implied by rho(t, r_c) and rho(r_c, r_o):
//   rho_tc*rho_co -+ sqrt(1 - rho_tc^2) * sqrt(1 - rho_co^2),
// clamped to [-1, 1]. Inputs must lie in [-1, 1] (1e-9 slack); anything
// further out throws, signalling an upstream normalization bug.
BoundPair transitive_bounds(double rho_tc, double rho_co);

// Width of the interval: 2 * sqrt(1 - rho_tc^2) * sqrt(1 - rho_co^2).
// Symmetric in its arguments, in [0, 2].
double transitive_gap(double rho_tc, double rho_co);

// True when an achieved correlation rho_tb is at or above the upper
// transitive bound, proving the bounded location cannot beat rho_tb.
bool sec_holds(double rho_tb, double rho_tc, double rho_co);

// Smallest auto-correlation that guarantees sec_holds for given rho_tb and
// rho_tc (upper root of the elimination quadratic). The guarantee applies in
// the engine's operating regime rho_tb >= rho_tc.
double elimination_autocorr_threshold(double rho_tb, double rho_tc);

// Expected-case threshold sqrt(1 - rho_tb^2): the auto-correlation level at
// which a location is expected to be eliminated without knowing rho_tc.
double expected_elimination_threshold(double rho_tb);

}  // namespace tmatch
