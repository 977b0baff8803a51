/**
 * @file integral.hpp
 * @brief Summed-area table for O(1) rectangle sums and means.
 */
#pragma once

#include "shipprior/core.hpp"

#include <vector>

namespace shipprior {

/**
 * Zero-padded summed-area table with (width + 1) x (height + 1) entries:
 * T(x, y) holds the sum of all pixels strictly left of column x and
 * strictly above row y. Accumulation is in double precision.
 *
 * Rectangle queries take inclusive pixel corners. Each corner coordinate is
 * clamped into the image independently, so every query covers at least one
 * pixel and means are taken over the clamped area.
 */
class IntegralTable {
public:
    IntegralTable() = default;
    explicit IntegralTable(const GrayImage& img);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    /// Raw table entry, 0 <= x <= width, 0 <= y <= height.
    double at(int x, int y) const { return sums_[static_cast<std::size_t>(y) * stride() + x]; }

    /// Sum over [x0, x1] x [y0, y1] after clamping.
    double rect_sum(int x0, int y0, int x1, int y1) const;
    double rect_mean(int x0, int y0, int x1, int y1) const;

    /// Mean of the square [cx - half, cx + half] x [cy - half, cy + half].
    double box_mean(int cx, int cy, int half) const {
        return rect_mean(cx - half, cy - half, cx + half, cy + half);
    }

    /// Mean of the n x n patch anchored on (cx, cy); see patch_origin().
    double patch_mean(int cx, int cy, int n) const;

private:
    std::size_t stride() const noexcept { return static_cast<std::size_t>(width_) + 1; }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> sums_;
};

IntegralTable build_integral(const GrayImage& img);

/// First pixel coordinate of an n-wide patch "at" c: c - n / 2. For odd n the
/// patch is centered on c; for even n it extends one pixel further left/up.
constexpr int patch_origin(int c, int n) noexcept { return c - n / 2; }

}  // namespace shipprior
