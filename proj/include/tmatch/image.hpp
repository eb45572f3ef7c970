// Grayscale image container and 8-bit PGM/PNG I/O.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tmatch {

// Row-major grayscale raster. Coordinates are (row, col) with the origin at
// the top-left; intensities are stored as doubles (loaded 8-bit data is
// integer-valued in [0,255], computed images are unconstrained).
class Image {
public:
    Image() = default;

    Image(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(check_dims(rows, cols), fill) {}

    Image(int rows, int cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != check_dims(rows, cols))
            throw std::invalid_argument("image data size does not match dimensions");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return data_.empty(); }
    std::size_t size() const { return data_.size(); }

    double operator()(int r, int c) const { return data_[std::size_t(r) * cols_ + c]; }
    double& operator()(int r, int c) { return data_[std::size_t(r) * cols_ + c]; }

    const double* row(int r) const { return data_.data() + std::size_t(r) * cols_; }
    double* row(int r) { return data_.data() + std::size_t(r) * cols_; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool same_size(const Image& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    static std::size_t check_dims(int rows, int cols) {
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("image dimensions must be at least 1x1");
        return std::size_t(rows) * std::size_t(cols);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

// Loads an 8-bit grayscale image; the format (PGM P5 or PNG) is detected from
// the file's magic bytes. Color, paletted, alpha and 16-bit inputs are
// rejected. Throws std::runtime_error on missing/malformed/unsupported files.
Image load_image(const std::string& path);

// Writes an image as binary PGM (P5) or 8-bit grayscale PNG depending on the
// file extension (.pgm / .png). Values are rounded and clamped to [0,255].
void save_image(const Image& img, const std::string& path);

// FNV-1a over the raw pixel bytes and dimensions; used for cache keys.
std::uint64_t content_hash(const Image& img);

}  // namespace tmatch
