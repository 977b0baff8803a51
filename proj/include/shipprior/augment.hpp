/**
 * @file augment.hpp
 * @brief Augmented-data schedule and the MixUp / Mosaic / affine operators.
 */
#pragma once

#include "shipprior/core.hpp"
#include "shipprior/random.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace shipprior {

/// R(m) = 1 - beta * (m / M)^2 for 0 <= m <= M; throws EpochOutOfRange otherwise.
double schedule_ratio(int epoch, const ScheduleConfig& cfg);

/// round(R * n), halves rounded up.
std::size_t augmented_count(double ratio, std::size_t n_samples);

struct EpochPlan {
    int epoch = 0;
    double ratio = 1.0;
    std::vector<bool> flags;  // true = sample is fed augmented this epoch

    std::size_t augmented() const;
};

/// Flags exactly round(R * n) samples through a seeded Fisher-Yates shuffle.
EpochPlan plan_epoch(int epoch, std::size_t n_samples, const ScheduleConfig& cfg, std::uint64_t seed);

struct Sample {
    GrayImage image;
    std::vector<Annotation> annotations;
};

/// Forward 2-D affine map p' = A p + t in pixel-center coordinates.
struct Affine2D {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
    double tx = 0.0, ty = 0.0;

    double map_x(double x, double y) const { return a * x + b * y + tx; }
    double map_y(double x, double y) const { return c * x + d * y + ty; }
    Affine2D inverse() const;
};

/// Axis-aligned hull of the four transformed corners.
BBox transform_bbox(const BBox& b, const Affine2D& m);

/// Inverse-mapped bilinear warp; samples outside the source contribute zero.
GrayImage warp_affine(const GrayImage& src, const Affine2D& forward, int out_width, int out_height);

struct AffineParams {
    double tx = 0.0;       // px, [-64, 64]
    double ty = 0.0;       // px, [-64, 64]
    double rot = 0.0;      // degrees, [-10, 10]
    double shear_x = 0.0;  // degrees, [-2, 2]
    double shear_y = 0.0;  // degrees, [-2, 2]
    double scale = 1.0;    // [0.5, 1.5]

    void validate() const;
    static AffineParams sample(Rng& rng);
};

/// Scale, rotate, shear, then translate, about the image center.
Affine2D affine_matrix(const AffineParams& p, int width, int height);

/// Boxes are hulled, clipped to the image and dropped below 1 px in either extent.
Sample apply_affine(const GrayImage& img, std::span<const Annotation> annotations, const AffineParams& p);

struct MosaicOptions {
    int width = 0;   // 0: take the first input's size
    int height = 0;
    std::optional<Pixel> center;  // fixed split point instead of the jittered one
    ImageId image_id = 0;         // assigned to every output annotation
};

/**
 * Four inputs tile a canvas split at a center jittered uniformly over the
 * middle half of each axis. Input k is rescaled by its own factor in
 * [0.5, 1.5] and placed against the split point: top-left, top-right,
 * bottom-left, bottom-right in order, then cropped to its quadrant.
 */
Sample mosaic(std::span<const Sample> inputs, std::uint64_t seed, const MosaicOptions& opts = {});

/// lambda * a + (1 - lambda) * b with the annotation union (a's first).
Sample mixup(const GrayImage& a, const GrayImage& b, double lambda, std::span<const Annotation> anns_a,
             std::span<const Annotation> anns_b);

/// Bilinear resize with clamp-to-edge sampling.
GrayImage resize_bilinear(const GrayImage& src, int out_width, int out_height);

}  // namespace shipprior
