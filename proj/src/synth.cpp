#include "tmatch/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tmatch/blur.hpp"

namespace tmatch {

namespace {

double quantize255(double v) {
    return std::clamp(std::round(v), 0.0, 255.0);
}

}  // namespace

Image synth_search_image(const SynthImageConfig& cfg, std::mt19937_64& rng) {
    if (cfg.rows < 1 || cfg.cols < 1)
        throw std::invalid_argument("synth: image dimensions must be positive");
    if (!(cfg.hi > cfg.lo))
        throw std::invalid_argument("synth: intensity range must satisfy hi > lo");

    Image img(cfg.rows, cfg.cols);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (double& v : img.data()) v = uni(rng);

    if (cfg.smooth_sigma > 0.0 && cfg.smooth_passes > 0) {
        const int d = std::max(1, int(std::ceil(3.0 * cfg.smooth_sigma)));
        const BlurKernel kernel = gaussian_kernel_radius(cfg.smooth_sigma, d);
        for (int pass = 0; pass < cfg.smooth_passes; ++pass) img = blur(img, kernel);
    }

    const auto [mn_it, mx_it] = std::minmax_element(img.data().begin(), img.data().end());
    const double vmin = *mn_it, vmax = *mx_it;
    const double scale = vmax > vmin ? (cfg.hi - cfg.lo) / (vmax - vmin) : 0.0;
    for (double& v : img.data()) v = quantize255(cfg.lo + (v - vmin) * scale);
    return img;
}

Image extract_template(const Image& I, const CorpusEntry& entry) {
    if (entry.m < 1 || entry.n < 1 || entry.row < 0 || entry.col < 0 ||
        entry.row + entry.m > I.rows() || entry.col + entry.n > I.cols())
        throw std::invalid_argument("extract_template: patch outside the image");
    Image t(entry.m, entry.n);
    for (int r = 0; r < entry.m; ++r)
        for (int c = 0; c < entry.n; ++c)
            t(r, c) = quantize255(entry.gain * I(entry.row + r, entry.col + c) + entry.offset);
    return t;
}

Corpus synth_corpus(const CorpusSpec& spec) {
    if (spec.image_count < 1) throw std::invalid_argument("synth: image count must be >= 1");
    if (spec.template_sizes.empty())
        throw std::invalid_argument("synth: template size list must not be empty");
    for (int m : spec.template_sizes)
        if (m < 1 || m > spec.image.rows || m > spec.image.cols)
            throw std::invalid_argument("synth: template size does not fit the search image");

    std::mt19937_64 rng(spec.seed);
    Corpus corpus;
    corpus.images.reserve(spec.image_count);
    for (int i = 0; i < spec.image_count; ++i) {
        corpus.images.push_back(synth_search_image(spec.image, rng));
        for (int m : spec.template_sizes) {
            std::uniform_int_distribution<int> row_d(0, spec.image.rows - m);
            std::uniform_int_distribution<int> col_d(0, spec.image.cols - m);
            for (int k = 0; k < spec.per_size; ++k) {
                CorpusEntry entry;
                entry.image_index = i;
                entry.row = row_d(rng);
                entry.col = col_d(rng);
                entry.m = m;
                entry.n = m;
                entry.gain = spec.gain;
                entry.offset = spec.offset;
                corpus.entries.push_back(entry);
            }
        }
    }
    return corpus;
}

}  // namespace tmatch
