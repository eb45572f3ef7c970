#include "tmatch/image.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace tmatch {

namespace {

uint8_t quantize(double v) {
    double r = std::lround(v);
    if (r < 0.0) return 0;
    if (r > 255.0) return 255;
    return uint8_t(r);
}

// --- PGM (P5) ----------------------------------------------------------

// Reads one header token, skipping whitespace and '#' comments.
bool next_pgm_token(std::istream& in, std::string& tok) {
    tok.clear();
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {}
            continue;
        }
        if (!std::isspace(ch)) break;
    }
    if (ch == EOF) return false;
    do {
        tok.push_back(char(ch));
        ch = in.get();
    } while (ch != EOF && !std::isspace(ch) && ch != '#');
    if (ch == '#') in.unget();
    return true;
}

Image load_pgm(std::istream& in, const std::string& path) {
    std::string tok;
    if (!next_pgm_token(in, tok) || tok != "P5")
        throw std::runtime_error("unsupported format (expected P5 PGM): " + path);

    long vals[3];
    for (long& v : vals) {
        if (!next_pgm_token(in, tok))
            throw std::runtime_error("malformed image (truncated PGM header): " + path);
        try {
            v = std::stol(tok);
        } catch (const std::exception&) {
            throw std::runtime_error("malformed image (bad PGM header token '" + tok + "'): " + path);
        }
    }
    long width = vals[0], height = vals[1], maxval = vals[2];
    if (width < 1 || height < 1)
        throw std::runtime_error("malformed image (zero-dimension PGM): " + path);
    if (maxval < 1 || maxval > 255)
        throw std::runtime_error("unsupported format (PGM maxval must be <= 255): " + path);

    // The header ends with exactly one whitespace byte before the payload.
    std::vector<uint8_t> raw(std::size_t(width) * std::size_t(height));
    in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size()));
    if (std::size_t(in.gcount()) != raw.size())
        throw std::runtime_error("malformed image (truncated PGM payload): " + path);

    Image img{int(height), int(width)};
    for (std::size_t i = 0; i < raw.size(); ++i) img.data()[i] = double(raw[i]);
    return img;
}

void save_pgm(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "P5\n" << img.cols() << " " << img.rows() << "\n255\n";
    std::vector<uint8_t> raw(img.size());
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = quantize(img.data()[i]);
    out.write(reinterpret_cast<const char*>(raw.data()), std::streamsize(raw.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

// --- PNG ----------------------------------------------------------------

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw std::runtime_error("cannot open file: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("libpng init failed");
    }

    std::vector<uint8_t> raw;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("malformed image (PNG decode error): " + path);
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);

    if (color_type != PNG_COLOR_TYPE_GRAY) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("unsupported format (only grayscale PNG accepted): " + path);
    }
    if (bit_depth > 8) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("unsupported format (only 8-bit PNG accepted): " + path);
    }
    if (width < 1 || height < 1) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("malformed image (zero-dimension PNG): " + path);
    }
    if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);

    raw.resize(std::size_t(width) * height);
    rows.resize(height);
    for (png_uint_32 r = 0; r < height; ++r) rows[r] = raw.data() + std::size_t(r) * width;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    Image img{int(height), int(width)};
    for (std::size_t i = 0; i < raw.size(); ++i) img.data()[i] = double(raw[i]);
    return img;
}

void save_png(const Image& img, const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw std::runtime_error("cannot write file: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("libpng init failed");
    }

    std::vector<uint8_t> raw(img.size());
    std::vector<png_bytep> rows(img.rows());
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("PNG encode error: " + path);
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, png_uint_32(img.cols()), png_uint_32(img.rows()), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = quantize(img.data()[i]);
    for (int r = 0; r < img.rows(); ++r) rows[r] = raw.data() + std::size_t(r) * img.cols();
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

Image load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() != 2) throw std::runtime_error("malformed image (file too short): " + path);
    in.seekg(0);

    if (magic[0] == 'P' && magic[1] == '5') return load_pgm(in, path);
    if (uint8_t(magic[0]) == 0x89 && magic[1] == 'P') {
        in.close();
        return load_png(path);
    }
    throw std::runtime_error("unsupported format (expected P5 PGM or PNG): " + path);
}

void save_image(const Image& img, const std::string& path) {
    if (img.empty()) throw std::invalid_argument("cannot save empty image");
    if (has_suffix(path, ".png")) {
        save_png(img, path);
    } else if (has_suffix(path, ".pgm")) {
        save_pgm(img, path);
    } else {
        throw std::invalid_argument("unsupported output extension (use .pgm or .png): " + path);
    }
}

std::uint64_t content_hash(const Image& img) {
    std::uint64_t h = 1469598103934665603ull;  // FNV offset basis
    auto mix = [&h](const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    };
    std::int64_t dims[2] = {img.rows(), img.cols()};
    mix(dims, sizeof dims);
    mix(img.data().data(), img.size() * sizeof(double));
    return h;
}

}  // namespace tmatch
