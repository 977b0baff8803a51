#include "shipprior/augment.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace shipprior;
using shipprior::testing::random_image;

namespace {

Annotation ann(double x, double y, double w, double h) { return {0, {x, y, w, h}, "ship"}; }

}  // namespace

TEST(Schedule, Examples) {
    EXPECT_EQ(schedule_ratio(0, {0.3, 10}), 1.0);
    EXPECT_NEAR(schedule_ratio(150, {0.8, 150}), 0.2, 1e-15);
    EXPECT_NEAR(schedule_ratio(75, {0.8, 150}), 0.8, 1e-15);
}

TEST(Schedule, EpochOutOfRange) {
    for (int m : {-1, 11}) {
        try {
            schedule_ratio(m, {0.5, 10});
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::EpochOutOfRange);
        }
    }
}

TEST(Schedule, NonIncreasingWithinUnitInterval) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        const double beta = 0.01 + 0.98 * static_cast<double>(rng() % 1000) / 1000.0;
        const int total = 1 + static_cast<int>(rng() % 300);
        double prev = 2.0;
        for (int m = 0; m <= total; ++m) {
            const double r = schedule_ratio(m, {beta, total});
            EXPECT_LE(r, prev);
            EXPECT_GT(r, 0.0);
            EXPECT_LE(r, 1.0);
            prev = r;
        }
        EXPECT_NEAR(schedule_ratio(total, {beta, total}), 1.0 - beta, 1e-15);
    }
}

TEST(PlanEpoch, Examples) {
    EXPECT_EQ(plan_epoch(0, 10, {0.5, 100}, 1).augmented(), 10u);
    // R = 1 - 0.75 * (1/1)^2 = 0.25.
    const EpochPlan p = plan_epoch(1, 8, {0.75, 1}, 9);
    EXPECT_EQ(p.augmented(), 2u);
    EXPECT_EQ(p.flags.size(), 8u);
    EXPECT_EQ(plan_epoch(5, 100, {0.6, 10}, 3).flags, plan_epoch(5, 100, {0.6, 10}, 3).flags);
}

TEST(PlanEpoch, CountsAreRoundedRatios) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const ScheduleConfig cfg{0.01 + 0.98 * static_cast<double>(rng() % 1000) / 1000.0,
                                 1 + static_cast<int>(rng() % 50)};
        const int m = static_cast<int>(rng() % (cfg.total_epochs + 1));
        const std::size_t n = 1 + rng() % 500;
        const EpochPlan p = plan_epoch(m, n, cfg, rng());
        EXPECT_EQ(p.augmented(), static_cast<std::size_t>(std::floor(p.ratio * n + 0.5)));
        EXPECT_EQ(p.ratio, schedule_ratio(m, cfg));
    }
    EXPECT_EQ(augmented_count(0.25, 10), 3u);  // 2.5 rounds up
    EXPECT_EQ(augmented_count(0.24, 10), 2u);
}

TEST(PlanEpoch, SubsetChangesAcrossEpochs) {
    const ScheduleConfig cfg{0.5, 10};
    EXPECT_NE(plan_epoch(3, 200, cfg, 42).flags, plan_epoch(4, 200, cfg, 42).flags);
    EXPECT_NE(plan_epoch(3, 200, cfg, 42).flags, plan_epoch(3, 200, cfg, 43).flags);
}

TEST(PlanEpoch, RejectsEmptyDataset) { EXPECT_THROW(plan_epoch(0, 0, {0.5, 10}, 1), Error); }

TEST(Rng, Reproducible) {
    Rng a(5), b(5);
    for (int k = 0; k < 100; ++k) {
        const double u = a.uniform01();
        EXPECT_EQ(u, b.uniform01());
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        const int v = a.between(-3, 3);
        EXPECT_EQ(v, b.between(-3, 3));
        EXPECT_GE(v, -3);
        EXPECT_LE(v, 3);
    }
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Affine, IdentityIsExact) {
    const GrayImage img = random_image(31, 24, 3);
    const std::vector<Annotation> anns{ann(3.5, 4, 10, 6), ann(20, 10, 5.25, 7)};
    const Sample s = apply_affine(img, anns, AffineParams{});
    EXPECT_EQ(s.image, img);
    ASSERT_EQ(s.annotations.size(), 2u);
    EXPECT_EQ(s.annotations[0].bbox, anns[0].bbox);
    EXPECT_EQ(s.annotations[1].bbox, anns[1].bbox);
}

TEST(Affine, TranslationShiftsBoxes) {
    const GrayImage img = random_image(64, 64, 4);
    const std::vector<Annotation> anns{ann(20, 20, 8, 8)};
    AffineParams p;
    p.tx = 10;
    const Sample s = apply_affine(img, anns, p);
    ASSERT_EQ(s.annotations.size(), 1u);
    EXPECT_NEAR(s.annotations[0].bbox.x, 30, 1e-12);
    EXPECT_NEAR(s.annotations[0].bbox.y, 20, 1e-12);
    EXPECT_NEAR(s.annotations[0].bbox.w, 8, 1e-12);
    for (int y = 0; y < 64; ++y) {
        for (int x = 10; x < 64; ++x) EXPECT_NEAR(s.image.at(x, y), img.at(x - 10, y), 1e-9);
        for (int x = 0; x < 10; ++x) EXPECT_EQ(s.image.at(x, y), 0.0);
    }
}

TEST(Affine, RotationGrowsCenteredSquareHull) {
    const std::vector<Annotation> anns{ann(22, 22, 20, 20)};
    AffineParams p;
    p.rot = 10;
    const Sample s = apply_affine(GrayImage(64, 64), anns, p);
    ASSERT_EQ(s.annotations.size(), 1u);
    const double side = 20 * (std::cos(10 * M_PI / 180) + std::sin(10 * M_PI / 180));
    EXPECT_NEAR(bbox_area(s.annotations[0].bbox), side * side, 1e-9);
    EXPECT_GE(bbox_area(s.annotations[0].bbox), 400.0);
}

TEST(Affine, BoxesPushedOutAreDropped) {
    const std::vector<Annotation> anns{ann(2, 2, 4, 4), ann(40, 40, 4, 4)};
    AffineParams p;
    p.tx = -40;
    const Sample s = apply_affine(GrayImage(64, 64), anns, p);
    ASSERT_EQ(s.annotations.size(), 1u);
    EXPECT_NEAR(s.annotations[0].bbox.x, 0, 1e-12);
    // Box partly pushed out is clipped.
    p.tx = -3.5;
    const Sample t = apply_affine(GrayImage(64, 64), anns, p);
    ASSERT_EQ(t.annotations.size(), 2u);
    EXPECT_NEAR(t.annotations[0].bbox.x, 0, 1e-12);
    EXPECT_NEAR(t.annotations[0].bbox.w, 2.5, 1e-12);
}

TEST(Affine, RangesAreEnforced) {
    AffineParams p;
    p.rot = 11;
    try {
        apply_affine(GrayImage(4, 4), {}, p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParamOutOfRange);
    }
    p = {};
    p.scale = 0.4;
    EXPECT_THROW(p.validate(), Error);
    p = {};
    p.shear_y = -2.5;
    EXPECT_THROW(p.validate(), Error);
    p = {};
    p.tx = 64;
    EXPECT_NO_THROW(p.validate());
}

TEST(Affine, SampledParamsStayInRange) {
    Rng rng(8);
    for (int k = 0; k < 1000; ++k) EXPECT_NO_THROW(AffineParams::sample(rng).validate());
}

TEST(Affine, InverseRoundTrips) {
    AffineParams p{12, -7, 6, 1.5, -1, 1.2};
    const Affine2D m = affine_matrix(p, 50, 40);
    const Affine2D inv = m.inverse();
    for (double x : {0.0, 13.5, 49.0}) {
        for (double y : {0.0, 22.0}) {
            EXPECT_NEAR(inv.map_x(m.map_x(x, y), m.map_y(x, y)), x, 1e-9);
            EXPECT_NEAR(inv.map_y(m.map_x(x, y), m.map_y(x, y)), y, 1e-9);
        }
    }
}

TEST(Mosaic, ConstantQuadrants) {
    std::vector<Sample> in;
    for (double v : {10.0, 20.0, 30.0, 40.0}) in.push_back({GrayImage(64, 48, v), {}});
    MosaicOptions opts;
    opts.center = Pixel{32, 24};
    for (std::uint64_t seed : {1u, 2u, 3u, 99u}) {
        const Sample s = mosaic(in, seed, opts);
        for (int y = 0; y < 48; ++y) {
            for (int x = 0; x < 64; ++x) {
                const int q = (x >= 32 ? 1 : 0) + (y >= 24 ? 2 : 0);
                ASSERT_NEAR(s.image.at(x, y), 10.0 * (q + 1), 1e-9) << x << "," << y;
            }
        }
    }
}

TEST(Mosaic, AnnotationsStayInTheirQuadrant) {
    std::mt19937_64 rng(6);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        std::vector<Sample> in;
        for (int k = 0; k < 4; ++k) {
            Sample s{random_image(80, 60, rng()), {}};
            for (int a = 0; a < 6; ++a) {
                s.annotations.push_back(ann(static_cast<double>(rng() % 70), static_cast<double>(rng() % 50),
                                            2 + static_cast<double>(rng() % 10), 2 + static_cast<double>(rng() % 10)));
                s.annotations.back().image_id = k;
            }
            in.push_back(std::move(s));
        }
        MosaicOptions opts;
        opts.image_id = 77;
        const Sample out = mosaic(in, seed, opts);
        EXPECT_EQ(out.image.width(), 80);
        EXPECT_EQ(out.image.height(), 60);
        // The split point is where the quadrants meet; recover it from the seed's first draws.
        Rng replay(seed);
        const int sx = replay.between(20, 60), sy = replay.between(15, 45);
        for (const auto& a : out.annotations) {
            EXPECT_EQ(a.image_id, 77);
            EXPECT_GE(a.bbox.w, 1.0);
            EXPECT_GE(a.bbox.h, 1.0);
            const bool left = a.bbox.x + a.bbox.w <= sx + 1e-9;
            const bool right = a.bbox.x >= sx - 1e-9;
            const bool top = a.bbox.y + a.bbox.h <= sy + 1e-9;
            const bool bottom = a.bbox.y >= sy - 1e-9;
            EXPECT_TRUE((left || right) && (top || bottom));
            EXPECT_GE(a.bbox.x, 0);
            EXPECT_LE(a.bbox.x + a.bbox.w, 80 + 1e-9);
        }
    }
}

TEST(Mosaic, SeededRunsRepeat) {
    std::vector<Sample> in;
    for (int k = 0; k < 4; ++k) in.push_back({random_image(40, 40, k), {ann(5, 5, 10, 10)}});
    const Sample a = mosaic(in, 1234), b = mosaic(in, 1234), c = mosaic(in, 1235);
    EXPECT_EQ(a.image, b.image);
    EXPECT_EQ(a.annotations.size(), b.annotations.size());
    EXPECT_NE(a.image, c.image);
}

TEST(Mosaic, NeedsFourInputs) {
    std::vector<Sample> three(3, Sample{GrayImage(8, 8), {}});
    EXPECT_THROW(mosaic(three, 0), Error);
}

TEST(MixUp, Examples) {
    const GrayImage a = random_image(10, 10, 1), b = random_image(10, 10, 2);
    const std::vector<Annotation> aa{ann(1, 1, 2, 2)}, bb{ann(5, 5, 3, 3), ann(0, 0, 1, 1)};
    const Sample one = mixup(a, b, 1.0, aa, bb);
    EXPECT_EQ(one.image, a);
    ASSERT_EQ(one.annotations.size(), 3u);
    EXPECT_EQ(one.annotations[0].bbox, aa[0].bbox);
    EXPECT_EQ(one.annotations[1].bbox, bb[0].bbox);

    const Sample half = mixup(GrayImage(6, 6, 10), GrayImage(6, 6, 30), 0.5, {}, {});
    for (double v : half.image.pixels()) EXPECT_EQ(v, 20.0);

    const Sample quarter = mixup(a, b, 0.25, {}, {});
    for (std::size_t k = 0; k < a.size(); ++k)
        EXPECT_NEAR(quarter.image.pixels()[k], 0.25 * a.pixels()[k] + 0.75 * b.pixels()[k], 1e-12);
}

TEST(MixUp, Symmetry) {
    const GrayImage a = random_image(12, 9, 3), b = random_image(12, 9, 4);
    for (double lambda : {0.0, 0.1, 0.37, 0.5, 0.9}) {
        const Sample x = mixup(a, b, lambda, {}, {});
        const Sample y = mixup(b, a, 1.0 - lambda, {}, {});
        for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(x.image.pixels()[k], y.image.pixels()[k], 1e-12);
    }
}

TEST(MixUp, Errors) {
    try {
        mixup(GrayImage(4, 4), GrayImage(4, 5), 0.5, {}, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
    EXPECT_THROW(mixup(GrayImage(4, 4), GrayImage(4, 4), 1.5, {}, {}), Error);
}

TEST(Resize, ConstantAndIdentity) {
    const GrayImage img = random_image(13, 7, 5);
    EXPECT_EQ(resize_bilinear(img, 13, 7), img);
    const GrayImage flat = resize_bilinear(GrayImage(10, 10, 4.0), 17, 6);
    for (double v : flat.pixels()) EXPECT_NEAR(v, 4.0, 1e-12);
}
