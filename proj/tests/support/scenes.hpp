#pragma once

#include "shipprior/core.hpp"

#include <vector>

namespace shipprior::testing {

/// 64 x 64 dark sea with three 2 x 2 bright targets, and a land block in the
/// lower right holding bright clutter well away from the shoreline.
struct BlobScene {
    GrayImage image;
    SceneMask mask;
    std::vector<BBox> targets;
    std::vector<BBox> clutter;
};

inline BlobScene blob_scene() {
    BlobScene s{GrayImage(64, 64, 0.0), SceneMask(64, 64), {}, {}};
    auto plant = [&](int x, int y, int size, double value) {
        for (int yy = y; yy < y + size; ++yy)
            for (int xx = x; xx < x + size; ++xx) s.image.at(xx, yy) = value;
        return BBox{static_cast<double>(x), static_cast<double>(y), static_cast<double>(size), static_cast<double>(size)};
    };
    for (int y = 36; y < 64; ++y)
        for (int x = 36; x < 64; ++x) s.mask.set(x, y, SceneLabel::Land);
    s.targets = {plant(10, 12, 2, 200), plant(44, 8, 2, 200), plant(18, 46, 2, 200)};
    s.clutter = {plant(44, 44, 2, 230), plant(54, 46, 2, 230), plant(46, 55, 3, 180), plant(56, 56, 2, 250)};
    return s;
}

}  // namespace shipprior::testing
