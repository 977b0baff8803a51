#include "shipprior/sse.hpp"

#include "oracles.hpp"
#include "shipprior_ref/naive_sse.hpp"

#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <random>

using namespace shipprior;
using shipprior::testing::random_image;

namespace {

void expect_close_rel(const std::vector<double>& got, const std::vector<double>& want, double rel) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
        ASSERT_LE(std::abs(got[k] - want[k]), rel * std::max(1.0, std::abs(want[k]))) << "pixel " << k;
    }
}

GrayImage hot_pixel(int size, int x, int y, double value) {
    GrayImage img(size, size, 0.0);
    img.at(x, y) = value;
    return img;
}

}  // namespace

TEST(BlockStats, ConstantImage) {
    const IntegralTable t(GrayImage(20, 20, 42.0));
    const BlockStats s = block_stats(t, {10, 10}, 2);
    for (double d : s.d) EXPECT_EQ(d, 0.0);
    EXPECT_EQ(s.v, 0.0);
}

TEST(BlockStats, PiecewiseConstantCenter) {
    // n = 2 puts the central patch on pixels {9, 10} x {9, 10}.
    GrayImage img(20, 20, 0.0);
    for (int y = 9; y <= 10; ++y)
        for (int x = 9; x <= 10; ++x) img.at(x, y) = 10.0;
    const BlockStats s = block_stats(IntegralTable(img), {10, 10}, 2);
    for (double d : s.d) EXPECT_DOUBLE_EQ(d, 10.0);
    EXPECT_DOUBLE_EQ(s.v, 10.0);
}

TEST(BlockStats, MatchesNestedLoops) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const GrayImage img = random_image(32, 32, rng());
        const IntegralTable t(img);
        const int cx = 6 + static_cast<int>(rng() % 20), cy = 6 + static_cast<int>(rng() % 20);
        const BlockStats s = block_stats(t, {cx, cy}, 2);
        const auto ref = reference::naive_block(img, cx, cy, 2);
        for (int i = 0; i < 8; ++i) EXPECT_NEAR(s.d[i], ref.d[i], 1e-9);
        EXPECT_NEAR(s.v, ref.v, 1e-9);
        double abs_sum = 0;
        for (double d : s.d) abs_sum += std::abs(d);
        EXPECT_DOUBLE_EQ(s.v, abs_sum / 8.0);
    }
}

TEST(Dissimilarity, Examples) {
    EXPECT_EQ(dissimilarity({1, 1, 1, 1, 1, 1, 1, 1}), 1.0);
    // Products (4, 2, 3, 1).
    EXPECT_EQ(dissimilarity({4, 2, 3, 1, 1, 1, 1, 1}), 3.0);
    EXPECT_EQ(dissimilarity({5, 0, 0, 0, -5, 0, 0, 0}), 0.0);
    // Repeated maximum: the second largest is the maximum itself.
    EXPECT_EQ(dissimilarity({2, 2, 1, 0, 2, 2, 1, 0}), 4.0);
    EXPECT_EQ(dissimilarity({-1, -2, -3, -4, 1, 1, 1, 1}), -2.0);
}

TEST(BackgroundWeight, Examples) {
    EXPECT_DOUBLE_EQ(background_weight(8, {2, 2, 2, 2, 2, 2, 2, 2}, 1e-6), 0.5);
    EXPECT_EQ(background_weight(0, {1, 5, 0, 3, 0, 0, 0, 0}, 1e-6), 0.0);
    EXPECT_NEAR(background_weight(255, {}, 1e-6), 2.55e8, 1e-3);
}

TEST(SseSingleScale, ConstantImageIsZero) {
    for (int n : {1, 2, 3}) {
        const PriorMap m = sse_single_scale(GrayImage(30, 25, 77.0), n);
        for (double v : m.values) EXPECT_EQ(v, 0.0);
    }
}

TEST(SseSingleScale, HotPixel) {
    const PriorMap m = sse_single_scale(hot_pixel(64, 30, 30, 255.0), 1);
    const double expected = 255.0 * 255.0 * (255.0 / 1e-6);
    EXPECT_NEAR(m.at(30, 30), expected, expected * 1e-9);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x)
            if (std::max(std::abs(x - 30), std::abs(y - 30)) >= 3) EXPECT_EQ(m.at(x, y), 0.0);
}

TEST(SseSingleScale, MatchesNaiveOracle) {
    const GrayImage img = random_image(48, 48, 99);
    const PriorMap fast = sse_single_scale(img, 1);
    const int scale[] = {1};
    expect_close_rel(fast.values, reference::naive_sse(img, scale), 1e-6);
}

TEST(SseSingleScale, NonNegativeAndFinite) {
    const PriorMap m = sse_single_scale(random_image(40, 30, 5, -100, 100), 2);
    for (double v : m.values) {
        EXPECT_TRUE(std::isfinite(v));
        EXPECT_GE(v, 0.0);
    }
}

TEST(SseSingleScale, RejectsBadScale) { EXPECT_THROW(sse_single_scale(GrayImage(4, 4), 0), Error); }

TEST(SseMultiScale, OneScaleIsIdentity) {
    const GrayImage img = random_image(33, 21, 1);
    const int s[] = {2};
    EXPECT_EQ(sse_multi_scale(img, s).values, sse_single_scale(img, 2).values);
}

TEST(SseMultiScale, DominatesEachScale) {
    const GrayImage img = random_image(40, 40, 2);
    const int s[] = {1, 2};
    const PriorMap multi = sse_multi_scale(img, s);
    for (int n : s) {
        const PriorMap single = sse_single_scale(img, n);
        for (std::size_t k = 0; k < multi.values.size(); ++k) EXPECT_GE(multi.values[k], single.values[k]);
    }
}

TEST(SseMultiScale, SquareSelectsMatchingScale) {
    GrayImage img(64, 64, 20.0);
    for (int y = 31; y <= 33; ++y)
        for (int x = 31; x <= 33; ++x) img.at(x, y) = 200.0;
    const double r1 = sse_single_scale(img, 1).at(32, 32);
    const double r2 = sse_single_scale(img, 2).at(32, 32);
    const double r3 = sse_single_scale(img, 3).at(32, 32);
    EXPECT_GT(r3, r2);
    EXPECT_GT(r3, r1);
    const int s[] = {1, 2, 3};
    EXPECT_EQ(sse_multi_scale(img, s).at(32, 32), r3);
}

TEST(SseOracle, RandomImagesBothScales) {
    std::mt19937_64 rng(314);
    for (int trial = 0; trial < 50; ++trial) {
        const int w = 8 + static_cast<int>(rng() % 57), h = 8 + static_cast<int>(rng() % 57);
        const GrayImage img = random_image(w, h, rng());
        for (int n : {1, 2}) {
            const int s[] = {n};
            expect_close_rel(sse_multi_scale(img, s).values, reference::naive_sse(img, s), 1e-6);
        }
    }
}

TEST(SseInvariance, BrightnessShift) {
    std::mt19937_64 rng(7);
    const int scales[] = {1, 2, 3};
    for (int trial = 0; trial < 20; ++trial) {
        const GrayImage img = random_image(48, 48, rng());
        const double c = (static_cast<double>(rng() % 2001) - 1000.0) / 10.0;
        std::vector<double> shifted(img.pixels().begin(), img.pixels().end());
        for (auto& v : shifted) v += c;
        const PriorMap a = sse_multi_scale(img, scales);
        const PriorMap b = sse_multi_scale(GrayImage(48, 48, shifted), scales);
        for (std::size_t k = 0; k < a.values.size(); ++k) ASSERT_NEAR(a.values[k], b.values[k], 1e-6);
    }
}

TEST(SseInvariance, ScaleCovariance) {
    std::mt19937_64 rng(8);
    const int scales[] = {1, 2, 3};
    for (int trial = 0; trial < 20; ++trial) {
        const GrayImage img = random_image(48, 48, rng());
        const double k = 0.1 + static_cast<double>(rng() % 1000) / 250.0;
        std::vector<double> scaled(img.pixels().begin(), img.pixels().end());
        for (auto& v : scaled) v *= k;
        const PriorMap a = sse_multi_scale(img, scales);
        const PriorMap b = sse_multi_scale(GrayImage(48, 48, scaled), scales);
        for (std::size_t p = 0; p < a.values.size(); ++p) {
            const double want = k * k * a.values[p];
            ASSERT_LE(std::abs(b.values[p] - want), 1e-6 * std::max(1.0, want));
        }
    }
}

TEST(SseInvariance, StepEdgeSuppressed) {
    for (bool vertical : {true, false}) {
        GrayImage img(64, 64, 0.0);
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x)
                if ((vertical ? x : y) >= 32) img.at(x, y) = 255.0;
        for (int n : {1, 2, 3}) {
            const PriorMap m = sse_single_scale(img, n);
            for (double v : m.values) EXPECT_EQ(v, 0.0);
        }
    }
}

TEST(SseParallel, ThreadCountDoesNotChangeBits) {
    const GrayImage img = random_image(97, 61, 12);
    const int scales[] = {1, 2, 3};
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const PriorMap serial = sse_multi_scale(img, scales);
    omp_set_num_threads(4);
    const PriorMap parallel = sse_multi_scale(img, scales);
    omp_set_num_threads(saved);
    EXPECT_EQ(serial.values, parallel.values);
}

TEST(Encode, Examples) {
    SseConfig cfg;
    const GrayImage img(3, 1, 0.0);
    PriorMap c(3, 1);
    c.values = {300.0, 0.0, 1e9};
    const EncodedPrior e = encode_prior(c, img, cfg);
    EXPECT_EQ(e.low_at(0, 0), 44u);
    EXPECT_EQ(e.high_at(0, 0), 1u);
    EXPECT_EQ(e.low_at(1, 0), 0u);
    EXPECT_EQ(e.high_at(1, 0), 0u);
    EXPECT_EQ(e.low_at(2, 0), 255u);
    EXPECT_EQ(e.high_at(2, 0), 255u);
    EXPECT_EQ(e.intensity, img);
}

TEST(Encode, Quantization) {
    EXPECT_EQ(quantize_response(-3.0, 65535), 0u);
    EXPECT_EQ(quantize_response(2.5, 65535), 3u);
    EXPECT_EQ(quantize_response(2.49, 65535), 2u);
    EXPECT_EQ(quantize_response(70000.0, 65535), 65535u);
}

TEST(Encode, DimensionMismatch) {
    try {
        encode_prior(PriorMap(4, 4), GrayImage(4, 5), SseConfig{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(Encode, ReconstructionOnRandomMaps) {
    std::mt19937_64 rng(21);
    SseConfig cfg;
    PriorMap c(50, 40);
    const GrayImage img(50, 40);
    for (int trial = 0; trial < 10; ++trial) {
        for (auto& v : c.values) v = static_cast<double>(rng() % 100000000) / 1000.0;
        const EncodedPrior e = encode_prior(c, img, cfg);
        for (std::size_t k = 0; k < c.values.size(); ++k) {
            const double expected = std::round(std::min(c.values[k], 65535.0));
            EXPECT_EQ(static_cast<double>(e.high[k] * 256 + e.low[k]), expected);
            EXPECT_LT(e.low[k], cfg.alpha1);
            EXPECT_LE(e.high[k], cfg.q_max / cfg.alpha2);
        }
    }
}

TEST(Encode, OtherModuli) {
    SseConfig cfg;
    cfg.alpha1 = 10;
    cfg.alpha2 = 7;
    cfg.q_max = 1000;
    PriorMap c(2, 1);
    c.values = {123.4, 5000.0};
    const EncodedPrior e = encode_prior(c, GrayImage(2, 1), cfg);
    EXPECT_EQ(e.low[0], 3u);
    EXPECT_EQ(e.high[0], 17u);
    EXPECT_EQ(e.low[1], 0u);
    EXPECT_EQ(e.high[1], 142u);
}

TEST(SseExtract, ConstantImage) {
    const GrayImage img(16, 16, 90.0);
    const EncodedPrior e = sse_extract(img, SseConfig{});
    EXPECT_EQ(e.intensity, img);
    for (auto v : e.low) EXPECT_EQ(v, 0u);
    for (auto v : e.high) EXPECT_EQ(v, 0u);
}

TEST(SseExtract, HotPixelSaturates) {
    const EncodedPrior e = sse_extract(hot_pixel(64, 20, 40, 255.0), SseConfig{});
    EXPECT_EQ(e.high_at(20, 40), 255u);
    EXPECT_EQ(e.low_at(20, 40), 255u);
}

TEST(SseExtract, IsTheComposition) {
    const GrayImage img = random_image(64, 64, 4);
    const SseConfig cfg;
    const EncodedPrior a = sse_extract(img, cfg);
    const EncodedPrior b = encode_prior(sse_multi_scale(img, cfg.scales, cfg.epsilon), img, cfg);
    EXPECT_EQ(a.low, b.low);
    EXPECT_EQ(a.high, b.high);
    EXPECT_EQ(a.intensity, b.intensity);
}

TEST(SseExtract, Deterministic) {
    const GrayImage img = random_image(50, 50, 10);
    EXPECT_EQ(sse_extract(img, {}).low, sse_extract(img, {}).low);
}
