#include "tmatch/blur.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tmatch/bounds.hpp"
#include "tmatch/detail.hpp"

namespace tmatch {

bool BlurKernel::is_delta() const {
    for (std::size_t k = 0; k < profile.size(); ++k)
        if (profile[k] != 0.0 && int(k) != radius) return false;
    return true;
}

BlurKernel BlurKernel::delta() { return BlurKernel{0, {1.0}}; }

BlurKernel BlurKernel::default_profile() {
    return BlurKernel{2, {0.05, 0.20, 0.50, 0.20, 0.05}};
}

BlurKernel BlurKernel::from_profile(std::vector<double> profile) {
    if (profile.empty() || profile.size() % 2 == 0)
        throw std::invalid_argument("blur kernel profile must have odd length");
    double sum = 0.0;
    for (double v : profile) {
        if (v < 0.0) throw std::invalid_argument("blur kernel weights must be non-negative");
        sum += v;
    }
    if (sum <= 0.0) throw std::invalid_argument("blur kernel weights must not all be zero");
    for (double& v : profile) v /= sum;
    BlurKernel k;
    k.radius = int(profile.size() / 2);
    k.profile = std::move(profile);
    return k;
}

BlurKernel gaussian_kernel(double sigma_g, double t_g) {
    if (!(sigma_g > 0.0)) throw std::invalid_argument("gaussian kernel: sigma_g must be > 0");
    if (!(t_g > 0.0 && t_g < 1.0))
        throw std::invalid_argument("gaussian kernel: t_g must be in (0,1)");
    const int d = std::max(0, int(std::ceil(std::sqrt(-2.0 * sigma_g * std::log(t_g)))));
    return gaussian_kernel_radius(sigma_g, d);
}

BlurKernel gaussian_kernel_radius(double sigma_g, int d) {
    if (!(sigma_g > 0.0)) throw std::invalid_argument("gaussian kernel: sigma_g must be > 0");
    if (d < 0) throw std::invalid_argument("gaussian kernel: radius must be >= 0");
    std::vector<double> profile(std::size_t(2 * d + 1));
    for (int i = -d; i <= d; ++i)
        profile[std::size_t(i + d)] = std::exp(-double(i) * i / (2.0 * sigma_g * sigma_g));
    return BlurKernel::from_profile(std::move(profile));
}

Image blur(const Image& img, const BlurKernel& kernel) {
    const int d = kernel.radius;
    if (d == 0 && kernel.profile.size() == 1) return img;
    const int p = img.rows(), q = img.cols();
    const std::vector<double>& prof = kernel.profile;

    // Rows, then columns, replicating the border sample.
    Image tmp(p, q);
    for (int r = 0; r < p; ++r) {
        const double* in = img.row(r);
        double* out = tmp.row(r);
        for (int c = 0; c < q; ++c) {
            double acc = 0.0;
            for (int k = -d; k <= d; ++k)
                acc += prof[std::size_t(k + d)] * in[std::clamp(c + k, 0, q - 1)];
            out[c] = acc;
        }
    }
    Image result(p, q);
    for (int r = 0; r < p; ++r) {
        double* out = result.row(r);
        for (int c = 0; c < q; ++c) out[c] = 0.0;
        for (int k = -d; k <= d; ++k) {
            const double wk = prof[std::size_t(k + d)];
            const double* in = tmp.row(std::clamp(r + k, 0, p - 1));
            for (int c = 0; c < q; ++c) out[c] += wk * in[c];
        }
    }
    return result;
}

double quality_threshold(double rho_th, double rho_max) {
    if (rho_th < 0.0 || rho_th > 1.0 || rho_max < 0.0 || rho_max > 1.0)
        throw std::invalid_argument("quality_threshold: inputs must be in [0,1]");
    if (rho_max < rho_th)
        throw std::invalid_argument("quality_threshold: rho_max must be >= rho_th");
    return elimination_autocorr_threshold(rho_th, rho_max);
}

FidelityMap blur_fidelity_map(const Image& I, const WindowStats& ws_orig, const Image& I_blur) {
    if (!I.same_size(I_blur))
        throw std::invalid_argument("blur_fidelity_map: dimension mismatch");
    const int m = ws_orig.win_rows, n = ws_orig.win_cols;

    Image product(I.rows(), I.cols());
    for (std::size_t i = 0; i < I.size(); ++i)
        product.data()[i] = I_blur.data()[i] * I.data()[i];
    const SumTable cross = running_sum(product, m, n);
    const WindowStats ws_blur = window_stats(I_blur, m, n);

    FidelityMap fid;
    fid.rows = ws_orig.rows;
    fid.cols = ws_orig.cols;
    fid.win_rows = m;
    fid.win_cols = n;
    fid.values.resize(std::size_t(fid.rows) * fid.cols);

    const double mn = double(m) * double(n);
    for (int r = 0; r < fid.rows; ++r)
        for (int c = 0; c < fid.cols; ++c) {
            double rho = 0.0;
            if (!ws_orig.flat(r, c) && !ws_blur.flat(r, c)) {
                const double num = cross.at(r, c) - mn * ws_blur.mu(r, c) * ws_orig.mu(r, c);
                rho = std::clamp(num / (ws_blur.omega(r, c) * ws_orig.omega(r, c)), -1.0, 1.0);
            }
            fid.values[std::size_t(r) * fid.cols + c] = rho;
        }
    return fid;
}

FidelityMap blur_fidelity_map(const Image& I, const Image& I_blur, int m, int n) {
    if (!I.same_size(I_blur))
        throw std::invalid_argument("blur_fidelity_map: dimension mismatch");
    return blur_fidelity_map(I, window_stats(I, m, n), I_blur);
}

namespace {

// Prefix table over an extent-sized indicator; answers "any marked location
// whose window covers pixel (x,y)" in O(1).
class CoverageQuery {
public:
    CoverageQuery(const std::vector<uint8_t>& marks, int rows, int cols, int m, int n)
        : rows_(rows), cols_(cols), m_(m), n_(n),
          prefix_(std::size_t(rows + 1) * (cols + 1), 0) {
        const std::size_t pw = std::size_t(cols) + 1;
        for (int r = 0; r < rows; ++r) {
            long long acc = 0;
            for (int c = 0; c < cols; ++c) {
                acc += marks[std::size_t(r) * cols + c];
                prefix_[std::size_t(r + 1) * pw + c + 1] = prefix_[std::size_t(r) * pw + c + 1] + acc;
            }
        }
    }

    bool covered(int x, int y) const {
        const int r0 = std::max(0, x - m_ + 1), r1 = std::min(rows_ - 1, x);
        const int c0 = std::max(0, y - n_ + 1), c1 = std::min(cols_ - 1, y);
        if (r0 > r1 || c0 > c1) return false;
        const std::size_t pw = std::size_t(cols_) + 1;
        const long long sum = prefix_[std::size_t(r1 + 1) * pw + c1 + 1] -
                              prefix_[std::size_t(r0) * pw + c1 + 1] -
                              prefix_[std::size_t(r1 + 1) * pw + c0] +
                              prefix_[std::size_t(r0) * pw + c0];
        return sum > 0;
    }

private:
    int rows_, cols_, m_, n_;
    std::vector<long long> prefix_;
};

// Copies original pixels over every pixel covered by a marked window.
void restore_marked(Image& blurred, const Image& original, const std::vector<uint8_t>& marks,
                    int rows, int cols, int m, int n) {
    const CoverageQuery cov(marks, rows, cols, m, n);
    for (int x = 0; x < original.rows(); ++x) {
        const double* src = original.row(x);
        double* dst = blurred.row(x);
        for (int y = 0; y < original.cols(); ++y)
            if (cov.covered(x, y)) dst[y] = src[y];
    }
}

}  // namespace

std::pair<Image, long long> unblur_violations(const Image& I_blur, const Image& I,
                                              const FidelityMap& fid, double lambda) {
    if (!I_blur.same_size(I))
        throw std::invalid_argument("unblur_violations: shape mismatch");

    std::vector<uint8_t> marks(std::size_t(fid.rows) * fid.cols, 0);
    long long count = 0;
    for (std::size_t i = 0; i < marks.size(); ++i)
        if (fid.values[i] < lambda) {
            marks[i] = 1;
            ++count;
        }

    Image restored = I_blur;
    if (count > 0)
        restore_marked(restored, I, marks, fid.rows, fid.cols, fid.win_rows, fid.win_cols);
    return {std::move(restored), count};
}

namespace {

// Repairs `blurred` in place until every location is either fully original
// or has fidelity >= lambda. Restoring a block can drag a neighbouring
// window's fidelity down, so the scan repeats until a fixed point; each pass
// strictly grows the set of original pixels, which bounds the loop.
long long repair_to_fixed_point(Image& blurred, const Image& original, const WindowStats& ws_orig,
                                double lambda) {
    const int m = ws_orig.win_rows, n = ws_orig.win_cols;
    const int er = ws_orig.rows, ec = ws_orig.cols;
    long long total_restored = 0;

    for (;;) {
        const FidelityMap fid = blur_fidelity_map(original, ws_orig, blurred);

        // A window already equal to the original is exempt regardless of its
        // fidelity value (flat originals read 0 by convention). The window
        // sum of the changed-pixel indicator answers that in O(1) per cell.
        Image changed(original.rows(), original.cols());
        for (std::size_t i = 0; i < original.size(); ++i)
            changed.data()[i] = blurred.data()[i] != original.data()[i] ? 1.0 : 0.0;
        const SumTable changed_in_window = running_sum(changed, m, n);

        std::vector<uint8_t> marks(std::size_t(er) * ec, 0);
        long long count = 0;
        for (int r = 0; r < er; ++r)
            for (int c = 0; c < ec; ++c) {
                if (fid.at(r, c) >= lambda) continue;
                if (changed_in_window.at(r, c) == 0.0) continue;  // already original content
                marks[std::size_t(r) * ec + c] = 1;
                ++count;
            }
        if (count == 0) break;
        restore_marked(blurred, original, marks, er, ec, m, n);
        total_restored += count;
    }
    return total_restored;
}

}  // namespace

OptAResult optimize_autocorrelation(const Image& I, int m, int n, const OptAParams& params) {
    const double lambda = quality_threshold(params.rho_th, params.rho_max);
    const WindowStats ws_orig = window_stats(I, m, n);

    EgsParams egs_params = params.egs;
    EGSResult egs0 = efficient_group_size(I, m, n, egs_params, ws_orig);

    OptAResult result;
    result.image = I;
    result.kappa = 0;
    result.lambda = lambda;
    result.trace.push_back(OptAIteration{egs0.h, egs0.w, egs0.cost.total, 0});
    double prev_cost = egs0.cost.total;
    egs_params.h0 = egs0.h;
    egs_params.w0 = egs0.w;
    result.egs = std::move(egs0);

    Image current = I;
    for (int iter = 1; iter <= params.max_iterations; ++iter) {
        Image blurred = blur(current, params.kernel);
        const long long restored = repair_to_fixed_point(blurred, I, ws_orig, lambda);

        EGSResult egs_k = efficient_group_size(blurred, m, n, egs_params);
        const double improvement = prev_cost - egs_k.cost.total;
        if (!(improvement >= params.margin * egs_k.cost.total)) break;

        result.trace.push_back(OptAIteration{egs_k.h, egs_k.w, egs_k.cost.total, restored});
        result.kappa = iter;
        prev_cost = egs_k.cost.total;
        egs_params.h0 = egs_k.h;
        egs_params.w0 = egs_k.w;
        result.egs = std::move(egs_k);
        current = std::move(blurred);
        result.image = current;
    }
    return result;
}

}  // namespace tmatch
