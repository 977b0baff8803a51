#pragma once

#include "shipprior/core.hpp"

#include <span>

namespace shipprior {

/// Center-preserving scale of a box by k (k > 0).
BBox expand_bbox(const BBox& b, double k);

/**
 * Land and cloud pixels become Negative; pixels inside any expanded box
 * (clipped, center-inclusion rule) become Positive and win over Negative;
 * everything else stays Unknown.
 */
Trimap build_trimap(std::span<const Annotation> annotations, const SceneMask& scene, double k,
                    int width, int height);

}  // namespace shipprior
