#include <doctest.h>

#include <filesystem>
#include <random>
#include <set>

#include "oracles.hpp"
#include "tmatch/autocorr.hpp"

using namespace tmatch;

TEST_CASE("exact 9x9 tiling with 3x3 groups") {
    const GroupGrid grid(9, 9, 3, 3);
    CHECK(grid.group_count() == 9);
    std::set<int> rows, cols;
    for (const Group& g : grid.groups()) {
        rows.insert(g.center_row);
        cols.insert(g.center_col);
    }
    CHECK(rows == std::set<int>{1, 4, 7});
    CHECK(cols == std::set<int>{1, 4, 7});
}

TEST_CASE("10x10 extent leaves one-cell boundary tiles") {
    const GroupGrid grid(10, 10, 3, 3);
    CHECK(grid.group_count() == 16);
    const Group& last = grid.groups().back();
    CHECK(last.r0 == 9);
    CHECK(last.r1 == 9);
    CHECK(last.c0 == 9);
    CHECK(last.c1 == 9);
    CHECK(last.center_row == 9);
    CHECK(last.center_col == 9);
}

TEST_CASE("every location belongs to exactly one group, offsets bounded") {
    const GroupGrid grid(23, 17, 5, 3);
    std::vector<int> owners(23 * 17, 0);
    for (const Group& g : grid.groups())
        for (int r = g.r0; r <= g.r1; ++r)
            for (int c = g.c0; c <= g.c1; ++c) {
                owners[std::size_t(r) * 17 + c]++;
                CHECK(std::abs(r - g.center_row) <= 2);
                CHECK(std::abs(c - g.center_col) <= 1);
            }
    for (int v : owners) CHECK(v == 1);
    for (int r = 0; r < 23; ++r)
        for (int c = 0; c < 17; ++c) {
            const Group& g = grid.group_of(r, c);
            CHECK(r >= g.r0);
            CHECK(r <= g.r1);
            CHECK(c >= g.c0);
            CHECK(c <= g.c1);
        }
}

TEST_CASE("h=w=1 makes every location its own center") {
    const GroupGrid grid(6, 6, 1, 1);
    CHECK(grid.group_count() == 36);
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) CHECK(grid.is_center(r, c));
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(GroupGrid(9, 9, 2, 3), std::invalid_argument);
    CHECK_THROWS_AS(GroupGrid(9, 9, 3, 4), std::invalid_argument);
    CHECK_THROWS_AS(GroupGrid(0, 9, 3, 3), std::invalid_argument);
    CHECK_THROWS_AS(build_group_grid(8, 8, 9, 9, 3, 3), std::invalid_argument);
}

TEST_CASE("column ramp gives auto-correlation 1 everywhere") {
    const Image I = oracle::ramp_image(20, 20);
    const GroupGrid grid = build_group_grid(20, 20, 6, 6, 3, 3);
    const AutoCorrMap map = local_autocorrelation(I, 6, 6, grid);
    for (int r = 0; r < map.rows; ++r)
        for (int c = 0; c < map.cols; ++c)
            CHECK(map.at(r, c) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("white noise map matches the direct correlation oracle") {
    std::mt19937_64 rng(101);
    const Image I = oracle::random_u8_image(40, 40, rng);
    const int m = 8, n = 8;
    const GroupGrid grid = build_group_grid(40, 40, m, n, 3, 3);
    const AutoCorrMap map = local_autocorrelation(I, m, n, grid);
    REQUIRE(map.rows == 33);

    for (const Group& g : grid.groups())
        for (int r = g.r0; r <= g.r1; ++r)
            for (int c = g.c0; c <= g.c1; ++c) {
                if (grid.is_center(r, c)) {
                    CHECK(map.at(r, c) == 1.0);
                    continue;
                }
                const double direct =
                    oracle::naive_zncc(I, g.center_row, g.center_col, I, r, c, m, n);
                CHECK(map.at(r, c) == doctest::Approx(direct).epsilon(1e-6));
            }
}

TEST_CASE("constant image: members degenerate to 0, centers stay 1") {
    const Image I(20, 20, 42.0);
    const GroupGrid grid = build_group_grid(20, 20, 5, 5, 3, 3);
    const AutoCorrMap map = local_autocorrelation(I, 5, 5, grid);
    for (int r = 0; r < map.rows; ++r)
        for (int c = 0; c < map.cols; ++c)
            CHECK(map.at(r, c) == (grid.is_center(r, c) ? 1.0 : 0.0));
}

TEST_CASE("one running-sum table per nonzero offset") {
    std::mt19937_64 rng(103);
    const Image I = oracle::random_u8_image(40, 40, rng);
    const WindowStats ws = window_stats(I, 7, 7);

    for (int h : {1, 3, 5}) {
        const GroupGrid grid = build_group_grid(40, 40, 7, 7, h, h);
        reset_running_sum_call_count();
        local_autocorrelation(I, 7, 7, grid, ws);
        CHECK(running_sum_call_count() == std::uint64_t(h) * h - 1);
    }
}

TEST_CASE("cache round trip with key validation") {
    std::mt19937_64 rng(107);
    const Image I = oracle::random_u8_image(30, 30, rng);
    const GroupGrid grid = build_group_grid(30, 30, 6, 6, 3, 3);
    const AutoCorrMap map = local_autocorrelation(I, 6, 6, grid);
    const std::uint64_t key = autocorr_cache_key(I, 6, 6, 3, 3);

    const auto path = std::filesystem::temp_directory_path() / "tmatch_map.bin";
    save_autocorr(map, key, path.string());

    const auto loaded = load_autocorr(path.string(), key);
    REQUIRE(loaded.has_value());
    CHECK(loaded->rows == map.rows);
    CHECK(loaded->cols == map.cols);
    CHECK(loaded->group_h == 3);
    CHECK(loaded->values == map.values);

    CHECK_FALSE(load_autocorr(path.string(), key + 1).has_value());
    CHECK_FALSE(load_autocorr("/nonexistent/map.bin", key).has_value());
    CHECK(autocorr_cache_key(I, 6, 6, 3, 3) != autocorr_cache_key(I, 6, 6, 5, 5));
    std::filesystem::remove(path);
}
