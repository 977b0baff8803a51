/**
 * @file naive_sse.hpp
 * @brief Serial nested-loop reference for the SSE prior.
 *
 * Every patch mean is summed pixel by pixel straight from the image, every
 * block is evaluated from scratch. Nothing is shared with the summed-area
 * path, which makes this the oracle for the accelerated kernels and the
 * baseline in the benchmark.
 */
#pragma once

#include "shipprior/core.hpp"

#include <array>
#include <span>
#include <vector>

namespace shipprior::reference {

/// Mean of the n x n patch anchored on (cx, cy), each corner clamped into the image.
double naive_patch_mean(const GrayImage& img, int cx, int cy, int n);

struct NaiveBlock {
    std::array<double, 8> d{};
    double v = 0.0;
};

NaiveBlock naive_block(const GrayImage& img, int cx, int cy, int n);

/// Response at one pixel for one scale, before the max over scales.
double naive_response(const GrayImage& img, int x, int y, int n, double epsilon);

/// Row-major dense map, max over scales.
std::vector<double> naive_sse(const GrayImage& img, std::span<const int> scales, double epsilon = 1e-6);

}  // namespace shipprior::reference
