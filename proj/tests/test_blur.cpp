#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tmatch/blur.hpp"
#include "tmatch/stats.hpp"

using namespace tmatch;

TEST_CASE("gaussian kernel support radius") {
    const BlurKernel k = gaussian_kernel(1.0, std::exp(-2.0));
    CHECK(k.radius == 2);
    CHECK(k.profile.size() == 5);

    double sum2d = 0.0;
    for (int i = -k.radius; i <= k.radius; ++i)
        for (int j = -k.radius; j <= k.radius; ++j) {
            const double w = k.weight(i, j);
            CHECK(w >= 0.0);
            CHECK(w <= 1.0);
            sum2d += w;
        }
    CHECK(std::abs(sum2d - 1.0) <= 1e-12);
}

TEST_CASE("vanishing sigma approaches a delta kernel") {
    const BlurKernel k = gaussian_kernel(1e-9, 0.1);
    std::mt19937_64 rng(5);
    const Image img = oracle::random_u8_image(9, 9, rng);
    const Image out = blur(img, k);
    for (std::size_t i = 0; i < img.size(); ++i)
        CHECK(out.data()[i] == doctest::Approx(img.data()[i]).epsilon(1e-12));
}

TEST_CASE("kernel construction validation") {
    CHECK_THROWS_AS(gaussian_kernel(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_kernel(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_kernel(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(BlurKernel::from_profile({0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(BlurKernel::from_profile({0.5, -0.1, 0.5}), std::invalid_argument);

    const BlurKernel k = BlurKernel::from_profile({1.0, 2.0, 1.0});
    CHECK(k.profile[1] == doctest::Approx(0.5));
    CHECK(BlurKernel::default_profile().profile[2] == 0.50);
    CHECK(BlurKernel::delta().is_delta());
}

TEST_CASE("blur leaves constant images and delta kernels alone") {
    const Image flat(10, 12, 99.0);
    const Image out = blur(flat, BlurKernel::default_profile());
    for (double v : out.data()) CHECK(v == doctest::Approx(99.0).epsilon(1e-12));

    std::mt19937_64 rng(11);
    const Image img = oracle::random_u8_image(7, 7, rng);
    const Image same = blur(img, BlurKernel::delta());
    for (std::size_t i = 0; i < img.size(); ++i) CHECK(same.data()[i] == img.data()[i]);
}

TEST_CASE("symmetric kernel preserves the interior of a ramp") {
    const Image ramp = oracle::ramp_image(12, 12);
    const Image out = blur(ramp, BlurKernel::default_profile());
    for (int r = 2; r < 10; ++r)
        for (int c = 2; c < 10; ++c)
            CHECK(out(r, c) == doctest::Approx(ramp(r, c)).epsilon(1e-12));
}

TEST_CASE("blur is mean-preserving on the interior") {
    std::mt19937_64 rng(13);
    const Image I = oracle::random_u8_image(40, 40, rng);
    const BlurKernel k = BlurKernel::default_profile();
    const Image B = blur(I, k);
    const int m = 9, n = 9;
    const WindowStats ws_b = window_stats(B, m, n);
    const WindowStats ws_i = window_stats(I, m, n);

    // Window mean of the blurred image = kernel-weighted mean of original
    // window means, away from the replicated border.
    for (int r = 4; r < ws_b.rows - 4; r += 5)
        for (int c = 4; c < ws_b.cols - 4; c += 5) {
            double want = 0.0;
            for (int i = -k.radius; i <= k.radius; ++i)
                for (int j = -k.radius; j <= k.radius; ++j)
                    want += k.weight(i, j) * ws_i.mu(r + i, c + j);
            CHECK(ws_b.mu(r, c) == doctest::Approx(want).epsilon(1e-6));
        }
}

TEST_CASE("quality threshold algebra") {
    CHECK(quality_threshold(0.8, 1.0) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(quality_threshold(0.8, 0.95) == doctest::Approx(0.947349939).epsilon(1e-7));
    CHECK(quality_threshold(0.0, 0.95) ==
          doctest::Approx(std::sqrt(1.0 - 0.95 * 0.95)).epsilon(1e-12));
    CHECK_THROWS_AS(quality_threshold(0.9, 0.8), std::invalid_argument);
    CHECK_THROWS_AS(quality_threshold(-0.1, 0.8), std::invalid_argument);
}

TEST_CASE("fidelity map basics") {
    std::mt19937_64 rng(17);
    const Image I = oracle::random_u8_image(30, 30, rng);

    const FidelityMap self = blur_fidelity_map(I, I, 7, 7);
    for (double v : self.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));

    const FidelityMap flat = blur_fidelity_map(I, Image(30, 30, 5.0), 7, 7);
    for (double v : flat.values) CHECK(v == 0.0);

    CHECK_THROWS_AS(blur_fidelity_map(I, Image(29, 30, 0.0), 7, 7), std::invalid_argument);
}

TEST_CASE("fidelity map equals the direct correlation oracle") {
    std::mt19937_64 rng(19);
    const Image I = oracle::random_u8_image(40, 40, rng);
    const Image B = blur(I, BlurKernel::default_profile());
    const FidelityMap fid = blur_fidelity_map(I, B, 8, 8);
    for (int r = 0; r < fid.rows; r += 3)
        for (int c = 0; c < fid.cols; c += 3) {
            const double direct = oracle::naive_zncc(I, r, c, B, r, c, 8, 8);
            CHECK(fid.at(r, c) == doctest::Approx(direct).epsilon(1e-6));
        }
}

TEST_CASE("unblur violations: none, all, and a single location") {
    std::mt19937_64 rng(23);
    const Image I = oracle::random_u8_image(20, 20, rng);
    const Image B = blur(I, BlurKernel::default_profile());
    const int m = 5, n = 5;
    FidelityMap fid = blur_fidelity_map(I, B, m, n);

    // All fidelities >= lambda: untouched.
    auto [same, count0] = unblur_violations(B, I, fid, -2.0);
    CHECK(count0 == 0);
    CHECK(same.data() == B.data());

    // All below lambda: full restoration.
    auto [restored, count_all] = unblur_violations(B, I, fid, 2.0);
    CHECK(count_all == (long long)fid.rows * fid.cols);
    CHECK(restored.data() == I.data());

    // Exactly one violating location restores one m x n block.
    FidelityMap one = fid;
    for (double& v : one.values) v = 1.0;
    one.values[std::size_t(7) * one.cols + 9] = 0.0;
    auto [patched, count1] = unblur_violations(B, I, one, 0.5);
    CHECK(count1 == 1);
    for (int r = 0; r < 20; ++r)
        for (int c = 0; c < 20; ++c) {
            const bool inside = r >= 7 && r < 7 + m && c >= 9 && c < 9 + n;
            CHECK(patched(r, c) == (inside ? I(r, c) : B(r, c)));
        }
}

TEST_CASE("delta kernel reduces the optimization to plain group sizing") {
    std::mt19937_64 rng(29);
    const Image I = oracle::random_u8_image(50, 50, rng);
    OptAParams params;
    params.kernel = BlurKernel::delta();
    const OptAResult res = optimize_autocorrelation(I, 9, 9, params);

    const EGSResult plain = efficient_group_size(I, 9, 9, params.egs);
    CHECK(res.kappa == 0);
    CHECK(res.egs.h == plain.h);
    CHECK(res.egs.w == plain.w);
    CHECK(res.egs.cost.total == plain.cost.total);
    REQUIRE(res.egs.trace.size() == plain.trace.size());
    for (std::size_t k = 0; k < plain.trace.size(); ++k) {
        CHECK(res.egs.trace[k].h == plain.trace[k].h);
        CHECK(res.egs.trace[k].cost.total == plain.trace[k].cost.total);
    }
    CHECK(res.image.data() == I.data());
}

TEST_CASE("ramp image cannot improve beyond the first iteration") {
    const Image I = oracle::ramp_image(40, 40);
    OptAParams params;
    const OptAResult res = optimize_autocorrelation(I, 8, 8, params);
    CHECK(res.trace.back().cost <= res.trace.front().cost);
    CHECK(res.kappa <= 1);
}

TEST_CASE("exit-state fidelity invariant on a noisy image") {
    std::mt19937_64 rng(31);
    const Image I = oracle::random_u8_image(60, 60, rng);
    const int m = 9, n = 9;
    OptAParams params;  // rho_th 0.8, rho_max 0.95
    const OptAResult res = optimize_autocorrelation(I, m, n, params);

    const FidelityMap fid = blur_fidelity_map(I, res.image, m, n);
    for (int r = 0; r < fid.rows; ++r)
        for (int c = 0; c < fid.cols; ++c) {
            if (fid.at(r, c) >= res.lambda - 1e-9) continue;
            // Every low-fidelity window must carry original content.
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j)
                    CHECK(res.image(r + i, c + j) == I(r + i, c + j));
        }
}

TEST_CASE("accepted optimization iterations decrease cost by the margin") {
    std::mt19937_64 rng(37);
    Image I = oracle::random_image(70, 70, rng, 0.0, 255.0);
    // Mild smoothing so blurring has room to help.
    for (int r = 1; r < 69; ++r)
        for (int c = 1; c < 69; ++c)
            I(r, c) = 0.4 * I(r, c) + 0.15 * (I(r - 1, c) + I(r + 1, c) + I(r, c - 1) + I(r, c + 1));
    OptAParams params;
    const OptAResult res = optimize_autocorrelation(I, 10, 10, params);
    for (std::size_t k = 1; k < res.trace.size(); ++k) {
        const double prev = res.trace[k - 1].cost;
        const double cur = res.trace[k].cost;
        CHECK(prev - cur >= params.margin * cur);
    }
    CHECK(res.trace.back().cost <= res.trace.front().cost);
    CHECK(res.kappa == int(res.trace.size()) - 1);
}

TEST_CASE("order preservation for a dominant peak") {
    // Template: smooth raised bump on a matched base. Peak A carries it
    // exactly; peak B is the inverted bump, so every correlation in A's blur
    // support exceeds every one in B's.
    const int ts = 15;
    Image t(ts, ts);
    for (int r = 0; r < ts; ++r)
        for (int c = 0; c < ts; ++c) {
            const double dr = r - 7.0, dc = c - 7.0;
            t(r, c) = 40.0 + 170.0 * std::exp(-(dr * dr + dc * dc) / 40.0);
        }

    std::mt19937_64 rng(41);
    Image I(64, 64);
    std::uniform_real_distribution<double> jitter(0.0, 8.0);
    for (double& v : I.data()) v = 40.0 + jitter(rng);
    const int ar = 10, ac = 10, br = 40, bc = 40;
    for (int r = 0; r < ts; ++r)
        for (int c = 0; c < ts; ++c) {
            I(ar + r, ac + c) = t(r, c);
            I(br + r, bc + c) = 250.0 - t(r, c);  // inverted peak
        }

    const BlurKernel k = BlurKernel::default_profile();
    const int d = k.radius;

    // Precondition of the ordering guarantee, measured on the original.
    double min_a = 2.0, max_b = -2.0;
    for (int i = -d; i <= d; ++i)
        for (int j = -d; j <= d; ++j) {
            min_a = std::min(min_a, zncc(t, 0, 0, I, ar + i, ac + j, ts, ts));
            max_b = std::max(max_b, zncc(t, 0, 0, I, br + i, bc + j, ts, ts));
        }
    REQUIRE(min_a > max_b);

    const Image B = blur(I, k);
    const double rho_a = zncc(t, 0, 0, B, ar, ac, ts, ts);
    const double rho_b = zncc(t, 0, 0, B, br, bc, ts, ts);
    CHECK(rho_a > rho_b);
}
