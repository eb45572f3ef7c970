#include "tmatch/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tmatch {

namespace {

constexpr double kRangeSlack = 1e-9;

double checked(double rho, const char* name) {
    if (std::abs(rho) > 1.0 + kRangeSlack)
        throw std::invalid_argument(std::string("correlation out of [-1,1]: ") + name);
    return std::clamp(rho, -1.0, 1.0);
}

// Half-width term sqrt(1-a^2)*sqrt(1-b^2), computed once so that upper,
// lower and gap stay exactly consistent with each other.
double half_gap(double a, double b) {
    return std::sqrt(std::max(0.0, 1.0 - a * a)) * std::sqrt(std::max(0.0, 1.0 - b * b));
}

}  // namespace

BoundPair transitive_bounds(double rho_tc, double rho_co) {
    const double a = checked(rho_tc, "rho_tc");
    const double b = checked(rho_co, "rho_co");
    const double center = a * b;
    const double s = half_gap(a, b);
    return BoundPair{std::clamp(center - s, -1.0, 1.0), std::clamp(center + s, -1.0, 1.0)};
}

double transitive_gap(double rho_tc, double rho_co) {
    const double a = checked(rho_tc, "rho_tc");
    const double b = checked(rho_co, "rho_co");
    return 2.0 * half_gap(a, b);
}

bool sec_holds(double rho_tb, double rho_tc, double rho_co) {
    const double tb = checked(rho_tb, "rho_tb");
    const double a = checked(rho_tc, "rho_tc");
    const double b = checked(rho_co, "rho_co");
    return tb >= a * b + half_gap(a, b);
}

double elimination_autocorr_threshold(double rho_tb, double rho_tc) {
    const double tb = checked(rho_tb, "rho_tb");
    const double tc = checked(rho_tc, "rho_tc");
    // Radicand factors as (1-tb^2)(1-tc^2); guard the fp dust.
    const double radicand = 1.0 + tc * tc * tb * tb - (tc * tc + tb * tb);
    return tb * tc + std::sqrt(std::max(0.0, radicand));
}

double expected_elimination_threshold(double rho_tb) {
    const double tb = checked(rho_tb, "rho_tb");
    return std::sqrt(std::max(0.0, 1.0 - tb * tb));
}

}  // namespace tmatch
