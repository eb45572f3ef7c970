// Deterministic smoothed-noise corpus generation: search images with tunable
// local auto-correlation plus template patches extracted at recorded
// ground-truth locations.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tmatch/image.hpp"

namespace tmatch {

struct SynthImageConfig {
    int rows = 512;
    int cols = 512;
    double smooth_sigma = 1.5;  // Gaussian smoothing of the white noise; 0 disables
    int smooth_passes = 1;
    double lo = 40.0;  // output intensity range before 8-bit quantization
    double hi = 215.0;
};

// White noise, smoothed, rescaled to [lo, hi] and quantized to integer
// intensities so an in-memory image round-trips PGM/PNG exactly.
Image synth_search_image(const SynthImageConfig& cfg, std::mt19937_64& rng);

struct CorpusEntry {
    int image_index = 0;
    int row = 0;  // ground-truth extraction location
    int col = 0;
    int m = 0;
    int n = 0;
    double gain = 1.0;
    double offset = 0.0;
};

// Cuts the m x n patch at the entry's location, applies the photometric
// perturbation t' = gain * t + offset, and quantizes to 8-bit values.
Image extract_template(const Image& I, const CorpusEntry& entry);

struct CorpusSpec {
    SynthImageConfig image;
    int image_count = 1;
    std::vector<int> template_sizes{41};  // square templates
    int per_size = 1;                     // templates per (image, size)
    double gain = 1.0;
    double offset = 0.0;
    std::uint64_t seed = 1;
};

struct Corpus {
    std::vector<Image> images;
    std::vector<CorpusEntry> entries;
};

// Same spec and seed always produce the same corpus.
Corpus synth_corpus(const CorpusSpec& spec);

}  // namespace tmatch
