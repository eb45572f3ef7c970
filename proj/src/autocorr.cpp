#include "tmatch/autocorr.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "tmatch/detail.hpp"

namespace tmatch {

GroupGrid::GroupGrid(int extent_rows, int extent_cols, int h, int w)
    : extent_rows_(extent_rows), extent_cols_(extent_cols), h_(h), w_(w) {
    if (extent_rows < 1 || extent_cols < 1)
        throw std::invalid_argument("group grid: empty search extent");
    if (h < 1 || w < 1 || h % 2 == 0 || w % 2 == 0)
        throw std::invalid_argument("group grid: group size must be odd and >= 1");

    tiles_r_ = (extent_rows + h - 1) / h;
    tiles_c_ = (extent_cols + w - 1) / w;
    groups_.reserve(std::size_t(tiles_r_) * tiles_c_);
    for (int ti = 0; ti < tiles_r_; ++ti) {
        const int r0 = ti * h;
        const int r1 = std::min(r0 + h, extent_rows) - 1;
        for (int tj = 0; tj < tiles_c_; ++tj) {
            const int c0 = tj * w;
            const int c1 = std::min(c0 + w, extent_cols) - 1;
            // Center of a clipped tile is the central cell of what remains.
            groups_.push_back(Group{r0, r1, c0, c1, (r0 + r1) / 2, (c0 + c1) / 2});
        }
    }
}

GroupGrid build_group_grid(int p, int q, int m, int n, int h, int w) {
    if (m > p || n > q)
        throw std::invalid_argument("group grid: template does not fit the image");
    return GroupGrid(p - m + 1, q - n + 1, h, w);
}

AutoCorrMap local_autocorrelation(const Image& I, int m, int n, const GroupGrid& grid,
                                  const WindowStats& ws) {
    const int p = I.rows(), q = I.cols();
    if (ws.rows != grid.extent_rows() || ws.cols != grid.extent_cols() ||
        ws.rows != p - m + 1 || ws.cols != q - n + 1)
        throw std::invalid_argument("local_autocorrelation: extent mismatch");

    AutoCorrMap map;
    map.rows = grid.extent_rows();
    map.cols = grid.extent_cols();
    map.group_h = grid.group_h();
    map.group_w = grid.group_w();
    map.values.assign(std::size_t(map.rows) * map.cols, 0.0);

    const int hr = grid.group_h() / 2;
    const int wr = grid.group_w() / 2;
    const double mn = double(m) * double(n);

    for (int di = -hr; di <= hr; ++di) {
        for (int dj = -wr; dj <= wr; ++dj) {
            if (di == 0 && dj == 0) continue;

            // P(a,b) = I(a+or, b+oc) * I(a+or+di, b+oc+dj) over the overlap
            // of the image with its (di,dj)-shifted copy.
            const int orr = std::max(0, -di);
            const int occ = std::max(0, -dj);
            const int ph = p - std::abs(di);
            const int pw = q - std::abs(dj);
            if (ph < m || pw < n) continue;  // no member windows possible at this offset
            Image product(ph, pw);
            for (int a = 0; a < ph; ++a) {
                const double* base = I.row(a + orr) + occ;
                const double* shifted = I.row(a + orr + di) + occ + dj;
                double* out = product.row(a);
                for (int b = 0; b < pw; ++b) out[b] = base[b] * shifted[b];
            }
            const SumTable cross = running_sum(product, m, n);

            for (const Group& g : grid.groups()) {
                const int mr = g.center_row + di;
                const int mc = g.center_col + dj;
                if (mr < g.r0 || mr > g.r1 || mc < g.c0 || mc > g.c1) continue;
                if (ws.flat(g.center_row, g.center_col) || ws.flat(mr, mc)) continue;
                const double cross_sum = cross.at(g.center_row - orr, g.center_col - occ);
                const double num =
                    cross_sum - mn * ws.mu(g.center_row, g.center_col) * ws.mu(mr, mc);
                const double rho =
                    num / (ws.omega(g.center_row, g.center_col) * ws.omega(mr, mc));
                map.values[std::size_t(mr) * map.cols + mc] = std::clamp(rho, -1.0, 1.0);
            }
        }
    }

    for (const Group& g : grid.groups())
        map.values[std::size_t(g.center_row) * map.cols + g.center_col] = 1.0;
    return map;
}

AutoCorrMap local_autocorrelation(const Image& I, int m, int n, const GroupGrid& grid) {
    return local_autocorrelation(I, m, n, grid, window_stats(I, m, n));
}

std::uint64_t autocorr_cache_key(const Image& I, int m, int n, int h, int w) {
    std::uint64_t key = content_hash(I);
    const std::int64_t params[4] = {m, n, h, w};
    const auto* b = reinterpret_cast<const unsigned char*>(params);
    for (std::size_t i = 0; i < sizeof params; ++i) {
        key ^= b[i];
        key *= 1099511628211ull;
    }
    return key;
}

namespace {
constexpr char kCacheMagic[8] = {'T', 'M', 'A', 'C', 'M', 'A', 'P', '1'};
}

void save_autocorr(const AutoCorrMap& map, std::uint64_t key, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    const std::int64_t header[4] = {map.rows, map.cols, map.group_h, map.group_w};
    out.write(kCacheMagic, sizeof kCacheMagic);
    out.write(reinterpret_cast<const char*>(header), sizeof header);
    out.write(reinterpret_cast<const char*>(&key), sizeof key);
    out.write(reinterpret_cast<const char*>(map.values.data()),
              std::streamsize(map.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::optional<AutoCorrMap> load_autocorr(const std::string& path, std::uint64_t expected_key) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;

    char magic[8];
    std::int64_t header[4];
    std::uint64_t key = 0;
    in.read(magic, sizeof magic);
    in.read(reinterpret_cast<char*>(header), sizeof header);
    in.read(reinterpret_cast<char*>(&key), sizeof key);
    if (!in || std::memcmp(magic, kCacheMagic, sizeof magic) != 0 || key != expected_key)
        return std::nullopt;
    if (header[0] < 1 || header[1] < 1 || header[2] < 1 || header[3] < 1) return std::nullopt;

    AutoCorrMap map;
    map.rows = int(header[0]);
    map.cols = int(header[1]);
    map.group_h = int(header[2]);
    map.group_w = int(header[3]);
    map.values.resize(std::size_t(map.rows) * map.cols);
    in.read(reinterpret_cast<char*>(map.values.data()),
            std::streamsize(map.values.size() * sizeof(double)));
    if (!in) return std::nullopt;
    return map;
}

}  // namespace tmatch
