/**
 * @file detect.hpp
 * @brief Candidate detector over the SSE prior: threshold, label, box, scene filter.
 */
#pragma once

#include "shipprior/core.hpp"
#include "shipprior/sse.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace shipprior {

struct BinaryMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BinaryMap() = default;
    BinaryMap(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool on = true) { bits[static_cast<std::size_t>(y) * width + x] = on ? 1 : 0; }
    std::size_t count() const;
};

struct ThresholdMode {
    enum class Kind { Fixed, Percentile, Otsu };
    Kind kind = Kind::Fixed;
    double value = 0.0;  // t for Fixed, p for Percentile

    static ThresholdMode fixed(double t) { return {Kind::Fixed, t}; }
    static ThresholdMode percentile(double p) { return {Kind::Percentile, p}; }
    static ThresholdMode otsu() { return {Kind::Otsu, 0.0}; }

    void validate() const;
};

struct DetectConfig {
    ThresholdMode threshold = ThresholdMode::fixed(10.0);
    int min_area = 2;
    int connectivity = 8;
    bool scene_filtering = true;

    void validate() const;
};

/// 256-bin histogram of floor(256 * v / max), capped at bin 255. All zero when max <= 0.
std::array<std::uint64_t, 256> quantized_histogram(const PriorMap& map);

/// Bin k maximizing the between-class variance of {bins <= k} vs {bins > k}; smallest k on ties.
int otsu_bin(const std::array<std::uint64_t, 256>& hist);

/// Linear-interpolated p-th percentile of the strictly positive values; nullopt if none.
std::optional<double> positive_percentile(const PriorMap& map, double p);

BinaryMap threshold_map(const PriorMap& map, const ThresholdMode& mode);

struct Component {
    std::vector<Pixel> pixels;  // raster order
};

/// Maximal connected sets of set bits, ordered by their first pixel in raster order.
std::vector<Component> connected_components(const BinaryMap& bits, int connectivity);

DetectionSet components_to_detections(const std::vector<Component>& comps, const PriorMap& map,
                                      int min_area, ImageId image_id = 0);

/// Drops detections whose center pixel is land or cloud; order preserved.
DetectionSet scene_filter(const DetectionSet& dets, const SceneMask& scene);

DetectionSet detect_pipeline(const GrayImage& img, const SseConfig& sse_cfg, const DetectConfig& det_cfg,
                             const SceneMask* scene = nullptr, ImageId image_id = 0);

}  // namespace shipprior
