/**
 * @file gradbank.hpp
 * @brief Fixed-weight eight-direction gradient bank with linear and square encodings.
 */
#pragma once

#include "shipprior/core.hpp"

#include <array>
#include <string>
#include <vector>

namespace shipprior {

using DirectionalMaps = std::array<GrayImage, 8>;

/// g_i(p) = I(p + dilation * dir_i) - I(p), neighbors clamped to the nearest edge pixel.
DirectionalMaps directional_diffs(const GrayImage& img, int dilation);

/// G(p) = sum_i W_i * g_i(p).
GrayImage fuse(const DirectionalMaps& maps, const std::array<double, 8>& weights);

/// The same operator as one dilated 3 x 3 kernel: neighbor weights W_i, center -sum W_i.
GrayImage apply_equivalent_kernel(const GrayImage& img, const std::array<double, 8>& weights, int dilation);

struct FeatureChannel {
    std::string name;  // "fused", "linear" or "square"
    GrayImage data;
};

struct GradientFeatures {
    int width = 0;
    int height = 0;
    std::vector<FeatureChannel> channels;

    const GrayImage* find(const std::string& name) const;
};

GradientFeatures gradient_features(const GrayImage& img, const GradConfig& cfg);

}  // namespace shipprior
