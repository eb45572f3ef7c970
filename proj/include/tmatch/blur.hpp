// Controlled non-uniform blurring: separable kernels, the blur-fidelity map
// against the original image, the quality threshold that guards detection,
// and the iterative auto-correlation optimization loop.
#pragma once

#include <utility>
#include <vector>

#include "tmatch/egs.hpp"
#include "tmatch/image.hpp"

namespace tmatch {

// Normalized averaging kernel stored as a 1-D profile of length 2d+1 and
// applied separably along rows then columns; the effective 2-D weight is
// w(i,j) = profile[i+d] * profile[j+d], which sums to 1.
struct BlurKernel {
    int radius = 0;
    std::vector<double> profile{1.0};

    double weight(int i, int j) const {
        return profile[std::size_t(i + radius)] * profile[std::size_t(j + radius)];
    }
    bool is_delta() const;

    static BlurKernel delta();
    // {0.05, 0.20, 0.50, 0.20, 0.05}
    static BlurKernel default_profile();
    // Validates oddness and non-negativity, then normalizes to sum 1.
    static BlurKernel from_profile(std::vector<double> profile);
};

// Gaussian profile with support radius d = ceil(sqrt(-2 * sigma_g * ln t_g)),
// t_g being the smallest retained filter value. sigma_g > 0, t_g in (0,1).
BlurKernel gaussian_kernel(double sigma_g, double t_g);

// Gaussian profile with an explicitly chosen support radius.
BlurKernel gaussian_kernel_radius(double sigma_g, int d);

// Separable weighted average with replicate padding at the borders.
Image blur(const Image& img, const BlurKernel& kernel);

// Minimum blur fidelity lambda that guarantees a peak above rho_th in the
// original image stays above rho_th after blurring (evaluated at peak value
// rho_max). Requires 0 <= rho_th <= rho_max <= 1.
double quality_threshold(double rho_th, double rho_max);

// Correlation between the original and blurred window at every location.
struct FidelityMap {
    int rows = 0;
    int cols = 0;
    int win_rows = 0;
    int win_cols = 0;
    std::vector<double> values;

    double at(int r, int c) const { return values[std::size_t(r) * cols + c]; }
};

FidelityMap blur_fidelity_map(const Image& I, const Image& I_blur, int m, int n);
// Variant reusing precomputed window statistics of the original image.
FidelityMap blur_fidelity_map(const Image& I, const WindowStats& ws_orig, const Image& I_blur);

// Copies the full window of original content back over every location whose
// fidelity falls below lambda. All copies source from the same original, so
// overlapping restores are idempotent. Returns the restored-location count.
std::pair<Image, long long> unblur_violations(const Image& I_blur, const Image& I,
                                              const FidelityMap& fid, double lambda);

struct OptAParams {
    double rho_th = 0.8;
    double rho_max = 0.95;
    BlurKernel kernel = BlurKernel::default_profile();
    double margin = 0.005;  // keep iterating while improvement >= margin * current cost
    int max_iterations = 64;
    EgsParams egs;  // h0/w0, rho_tb for the inner cost estimate, xi
};

struct OptAIteration {
    int h = 0;
    int w = 0;
    double cost = 0.0;
    long long restored = 0;  // windows restored to original content this iteration
};

struct OptAResult {
    Image image;    // optimized blurred image
    EGSResult egs;  // group size, map and cost on that image
    int kappa = 0;  // accepted blur applications carried by `image`
    double lambda = 1.0;
    std::vector<OptAIteration> trace;  // accepted iterations; index 0 is the unblurred baseline
};

// Iteratively blurs the search image, restores every location whose fidelity
// against the ORIGINAL image falls below lambda, and re-runs the group-size
// optimization; stops when the cost improvement drops under the margin.
OptAResult optimize_autocorrelation(const Image& I, int m, int n, const OptAParams& params);

}  // namespace tmatch
