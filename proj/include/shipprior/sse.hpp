/**
 * @file sse.hpp
 * @brief Scene semantic extractor: a dense multi-scale local-contrast prior.
 *
 * For a patch edge n, every pixel p is the center of a window of edge 9n laid
 * out as a 3 x 3 grid of blocks (edge 3n), each block itself a 3 x 3 grid of
 * n x n patches:
 *
 *   - the central block C sits on p, the surrounding blocks B_1..B_8 on
 *     p + 3n * dir_i;
 *   - inside any block the central patch O sits on the block center and the
 *     surrounding patches P_1..P_8 on center + n * dir_i.
 *
 * Directions run clockwise from east (see kDirections), so i and i + 4 are
 * geometric opposites. Per block, d_i = mean(O) - mean(P_i) and
 * V = mean(|d_i|). The central block's opposed products d_i * d_{i+4} are
 * ranked and the second largest is taken as the contrast S; the weight is
 * W = V_C / max(sum V_{B_i}, epsilon). The response is max(S * W, 0), and the
 * prior is the pointwise maximum over scales.
 *
 * Patch means clamp to the image (see IntegralTable).
 */
#pragma once

#include "shipprior/core.hpp"
#include "shipprior/integral.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace shipprior {

struct PriorMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    PriorMap() = default;
    PriorMap(int w, int h) : width(w), height(h), values(static_cast<std::size_t>(w) * h, 0.0) {}

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    double max_value() const;
};

struct BlockStats {
    std::array<double, 8> d{};
    double v = 0.0;
};

BlockStats block_stats(const IntegralTable& table, Pixel block_center, int n);

/// Second largest of the four opposed-direction products d_i * d_{i+4}.
double dissimilarity(const std::array<double, 8>& d);

double background_weight(double v_center, const std::array<double, 8>& v_blocks, double epsilon);

/// Dense single-scale response, row-parallel.
PriorMap sse_single_scale(const IntegralTable& table, int n, double epsilon = 1e-6);
PriorMap sse_single_scale(const GrayImage& img, int n, double epsilon = 1e-6);

PriorMap sse_multi_scale(const GrayImage& img, std::span<const int> scales, double epsilon = 1e-6);

/// Channels (I, C', C'') of the encoded prior.
struct EncodedPrior {
    int width = 0;
    int height = 0;
    GrayImage intensity;
    std::vector<std::uint32_t> low;   // C' = C_q mod alpha1
    std::vector<std::uint32_t> high;  // C'' = floor(C_q / alpha2)

    std::uint32_t low_at(int x, int y) const { return low[static_cast<std::size_t>(y) * width + x]; }
    std::uint32_t high_at(int x, int y) const { return high[static_cast<std::size_t>(y) * width + x]; }
};

/// C_q = round(min(C, q_max)).
std::uint64_t quantize_response(double c, std::uint32_t q_max);

EncodedPrior encode_prior(const PriorMap& prior, const GrayImage& img, const SseConfig& cfg);

EncodedPrior sse_extract(const GrayImage& img, const SseConfig& cfg);

}  // namespace shipprior
