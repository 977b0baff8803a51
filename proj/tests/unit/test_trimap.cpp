#include "shipprior/trimap.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace shipprior;

namespace {

Annotation ann(double x, double y, double w, double h) { return {0, {x, y, w, h}, "ship"}; }

SceneMask random_scene(int w, int h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> labels(static_cast<std::size_t>(w) * h);
    for (auto& l : labels) l = static_cast<std::uint8_t>(rng() % 3);
    return SceneMask(w, h, labels);
}

}  // namespace

TEST(ExpandBBox, Examples) {
    EXPECT_EQ(expand_bbox({10, 10, 10, 10}, 2), (BBox{5, 5, 20, 20}));
    const BBox b{3.25, 7.5, 4.5, 9};
    EXPECT_EQ(expand_bbox(b, 1), b);
    EXPECT_EQ(expand_bbox({0, 0, 4, 8}, 3), (BBox{-4, -8, 12, 24}));
}

TEST(ExpandBBox, RejectsNonPositiveFactor) {
    EXPECT_THROW(expand_bbox({0, 0, 1, 1}, 0), Error);
    EXPECT_THROW(expand_bbox({0, 0, 1, 1}, -1), Error);
}

TEST(BuildTrimap, NoAnnotationsAllSea) {
    const Trimap t = build_trimap({}, SceneMask(16, 16), 2, 16, 16);
    EXPECT_EQ(t.count(TrimapLabel::Unknown), 256u);
}

TEST(BuildTrimap, CenteredBoxDoubles) {
    const std::vector<Annotation> anns{ann(27, 27, 10, 10)};
    const Trimap t = build_trimap(anns, SceneMask(64, 64), 2, 64, 64);
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            const bool inside = x >= 22 && x < 42 && y >= 22 && y < 42;
            ASSERT_EQ(t.at(x, y), inside ? TrimapLabel::Positive : TrimapLabel::Unknown) << x << "," << y;
        }
    }
    EXPECT_EQ(t.count(TrimapLabel::Positive), 400u);
}

TEST(BuildTrimap, PositiveWinsOverLand) {
    // Land occupies x >= 20; the expanded box [12, 24) reaches into it.
    SceneMask scene(32, 32);
    for (int y = 0; y < 32; ++y)
        for (int x = 20; x < 32; ++x) scene.set(x, y, SceneLabel::Land);
    const std::vector<Annotation> anns{ann(15, 10, 6, 6)};
    const Trimap t = build_trimap(anns, scene, 2, 32, 32);
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 32; ++x) {
            const bool positive = x >= 12 && x < 24 && y >= 7 && y < 19;
            TrimapLabel want = TrimapLabel::Unknown;
            if (x >= 20) want = TrimapLabel::Negative;
            if (positive) want = TrimapLabel::Positive;
            ASSERT_EQ(t.at(x, y), want) << x << "," << y;
        }
    }
}

TEST(BuildTrimap, CloudIsNegativeToo) {
    SceneMask scene(4, 1, std::vector<std::uint8_t>{0, 1, 2, 0});
    const Trimap t = build_trimap({}, scene, 2, 4, 1);
    EXPECT_EQ(t.at(0, 0), TrimapLabel::Unknown);
    EXPECT_EQ(t.at(1, 0), TrimapLabel::Negative);
    EXPECT_EQ(t.at(2, 0), TrimapLabel::Negative);
}

TEST(BuildTrimap, DimensionMismatch) {
    try {
        build_trimap({}, SceneMask(10, 10), 2, 10, 11);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(BuildTrimap, PartitionAndMonotonicity) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const SceneMask scene = random_scene(40, 30, rng());
        std::vector<Annotation> anns;
        for (int a = 0; a < 4; ++a) {
            anns.push_back(ann(static_cast<double>(rng() % 400) / 10.0 - 2, static_cast<double>(rng() % 300) / 10.0 - 2,
                               1 + static_cast<double>(rng() % 80) / 10.0, 1 + static_cast<double>(rng() % 80) / 10.0));
        }
        std::size_t prev_positive = 0;
        Trimap prev;
        for (double k : {0.5, 1.0, 1.5, 2.0, 3.0, 4.5}) {
            const Trimap t = build_trimap(anns, scene, k, 40, 30);
            EXPECT_EQ(t.count(TrimapLabel::Unknown) + t.count(TrimapLabel::Positive) + t.count(TrimapLabel::Negative),
                      1200u);
            EXPECT_GE(t.count(TrimapLabel::Positive), prev_positive);
            if (prev_positive > 0) {
                for (int y = 0; y < 30; ++y)
                    for (int x = 0; x < 40; ++x)
                        if (prev.at(x, y) == TrimapLabel::Positive) EXPECT_EQ(t.at(x, y), TrimapLabel::Positive);
            }
            prev_positive = t.count(TrimapLabel::Positive);
            prev = t;
        }
    }
}

TEST(BuildTrimap, UnitFactorIsBoxUnion) {
    const std::vector<Annotation> anns{ann(2.5, 3, 4, 2.5), ann(5, 4, 3, 3), ann(-3, -3, 5, 5)};
    const Trimap t = build_trimap(anns, SceneMask(12, 12), 1, 12, 12);
    for (int y = 0; y < 12; ++y) {
        for (int x = 0; x < 12; ++x) {
            bool inside = false;
            for (const auto& a : anns)
                inside |= x >= a.bbox.x && x < a.bbox.x + a.bbox.w && y >= a.bbox.y && y < a.bbox.y + a.bbox.h;
            EXPECT_EQ(t.at(x, y) == TrimapLabel::Positive, inside) << x << "," << y;
        }
    }
}

TEST(BuildTrimap, WithoutAnnotationsNegativeIsLandAndCloud) {
    const SceneMask scene = random_scene(25, 25, 9);
    const Trimap t = build_trimap({}, scene, 2, 25, 25);
    EXPECT_EQ(t.count(TrimapLabel::Positive), 0u);
    for (int y = 0; y < 25; ++y)
        for (int x = 0; x < 25; ++x) EXPECT_EQ(t.at(x, y) == TrimapLabel::Negative, scene.is_background(x, y));
}
