// Group-grid geometry over the search extent and the local auto-correlation
// map of every search location against its group center.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tmatch/image.hpp"
#include "tmatch/stats.hpp"

namespace tmatch {

struct Group {
    int r0, r1;  // inclusive tile bounds in extent coordinates
    int c0, c1;
    int center_row, center_col;
};

// Tiling of the (p-m+1) x (q-n+1) search extent into h x w groups anchored
// at the top-left; boundary tiles may be clipped. h and w must be odd so
// full tiles have a true central cell.
class GroupGrid {
public:
    GroupGrid() = default;
    GroupGrid(int extent_rows, int extent_cols, int h, int w);

    int extent_rows() const { return extent_rows_; }
    int extent_cols() const { return extent_cols_; }
    int group_h() const { return h_; }
    int group_w() const { return w_; }
    int tiles_rows() const { return tiles_r_; }
    int tiles_cols() const { return tiles_c_; }
    int group_count() const { return tiles_r_ * tiles_c_; }

    const std::vector<Group>& groups() const { return groups_; }
    const Group& group_of(int r, int c) const {
        return groups_[std::size_t(std::min(r / h_, tiles_r_ - 1)) * tiles_c_ +
                       std::min(c / w_, tiles_c_ - 1)];
    }
    bool is_center(int r, int c) const {
        const Group& g = group_of(r, c);
        return g.center_row == r && g.center_col == c;
    }

private:
    int extent_rows_ = 0, extent_cols_ = 0;
    int h_ = 0, w_ = 0;
    int tiles_r_ = 0, tiles_c_ = 0;
    std::vector<Group> groups_;
};

// Builds the grid for a p x q image and m x n template. Throws on even h/w
// or an empty search extent.
GroupGrid build_group_grid(int p, int q, int m, int n, int h, int w);

// Per-location correlation against the group center. Entries at centers are
// exactly 1; locations whose window (or whose center's window) is flat carry
// the degenerate value 0.
struct AutoCorrMap {
    int rows = 0;  // search extent
    int cols = 0;
    int group_h = 0;
    int group_w = 0;
    std::vector<double> values;

    double at(int r, int c) const { return values[std::size_t(r) * cols + c]; }
};

// One pass per nonzero offset (hw-1 total): shifted product image, running
// sum, then normalization by the precomputed window statistics.
AutoCorrMap local_autocorrelation(const Image& I, int m, int n, const GroupGrid& grid,
                                  const WindowStats& ws);
AutoCorrMap local_autocorrelation(const Image& I, int m, int n, const GroupGrid& grid);

// Cache key covering the image content and the map parameters.
std::uint64_t autocorr_cache_key(const Image& I, int m, int n, int h, int w);

// Flat binary cache: small header (extent, group size, key) + doubles.
void save_autocorr(const AutoCorrMap& map, std::uint64_t key, const std::string& path);

// Returns the map when the file exists, parses, and its stored key matches.
std::optional<AutoCorrMap> load_autocorr(const std::string& path, std::uint64_t expected_key);

}  // namespace tmatch
