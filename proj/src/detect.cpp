#include "shipprior/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace shipprior {

std::size_t BinaryMap::count() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

void ThresholdMode::validate() const {
    switch (kind) {
        case Kind::Fixed:
            if (!(value >= 0.0) || !std::isfinite(value)) throw Error(ErrorCode::InvalidConfig, "fixed threshold must be >= 0");
            break;
        case Kind::Percentile:
            if (!(value > 0.0 && value < 100.0)) throw Error(ErrorCode::InvalidConfig, "percentile must lie in (0, 100)");
            break;
        case Kind::Otsu:
            break;
    }
}

void DetectConfig::validate() const {
    threshold.validate();
    if (min_area < 1) throw Error(ErrorCode::InvalidConfig, "min_area must be >= 1");
    if (connectivity != 4 && connectivity != 8) throw Error(ErrorCode::InvalidConfig, "connectivity must be 4 or 8");
}

namespace {

int quantize_bin(double v, double top) {
    const double b = std::floor(v / top * 256.0);
    return static_cast<int>(std::clamp(b, 0.0, 255.0));
}

}  // namespace

std::array<std::uint64_t, 256> quantized_histogram(const PriorMap& map) {
    std::array<std::uint64_t, 256> hist{};
    const double top = map.max_value();
    if (!(top > 0.0)) return hist;
    for (double v : map.values) ++hist[quantize_bin(v, top)];
    return hist;
}

int otsu_bin(const std::array<std::uint64_t, 256>& hist) {
    double total = 0.0, weighted_total = 0.0;
    for (int b = 0; b < 256; ++b) {
        total += static_cast<double>(hist[b]);
        weighted_total += static_cast<double>(b) * static_cast<double>(hist[b]);
    }
    if (total == 0.0) return 255;

    int best_bin = 0;
    double best_var = -1.0;
    double w0 = 0.0, sum0 = 0.0;
    for (int k = 0; k < 255; ++k) {
        w0 += static_cast<double>(hist[k]);
        sum0 += static_cast<double>(k) * static_cast<double>(hist[k]);
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (weighted_total - sum0) / w1;
        const double var = (w0 / total) * (w1 / total) * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_bin = k;
        }
    }
    return best_bin;
}

std::optional<double> positive_percentile(const PriorMap& map, double p) {
    std::vector<double> pos;
    for (double v : map.values) {
        if (v > 0.0) pos.push_back(v);
    }
    if (pos.empty()) return std::nullopt;
    std::sort(pos.begin(), pos.end());
    const double rank = p / 100.0 * static_cast<double>(pos.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const std::size_t hi = std::min(lo + 1, pos.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return pos[lo] + (pos[hi] - pos[lo]) * frac;
}

BinaryMap threshold_map(const PriorMap& map, const ThresholdMode& mode) {
    mode.validate();
    BinaryMap out(map.width, map.height);
    switch (mode.kind) {
        case ThresholdMode::Kind::Fixed:
            for (std::size_t k = 0; k < map.values.size(); ++k) out.bits[k] = map.values[k] > mode.value;
            break;
        case ThresholdMode::Kind::Percentile: {
            const auto t = positive_percentile(map, mode.value);
            if (!t) break;
            for (std::size_t k = 0; k < map.values.size(); ++k) out.bits[k] = map.values[k] > *t;
            break;
        }
        case ThresholdMode::Kind::Otsu: {
            const double top = map.max_value();
            if (!(top > 0.0)) break;
            const int cut = otsu_bin(quantized_histogram(map));
            for (std::size_t k = 0; k < map.values.size(); ++k) {
                out.bits[k] = map.values[k] > 0.0 && quantize_bin(map.values[k], top) > cut;
            }
            break;
        }
    }
    return out;
}

namespace {

class DisjointSets {
public:
    int make() {
        parent_.push_back(static_cast<int>(parent_.size()));
        return parent_.back();
    }
    int find(int a) {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<int> parent_;
};

}  // namespace

std::vector<Component> connected_components(const BinaryMap& bits, int connectivity) {
    if (connectivity != 4 && connectivity != 8) throw Error(ErrorCode::InvalidConfig, "connectivity must be 4 or 8");
    const int w = bits.width;
    const int h = bits.height;
    std::vector<int> labels(static_cast<std::size_t>(w) * h, -1);
    auto label_at = [&](int x, int y) -> int {
        if (x < 0 || y < 0 || x >= w) return -1;
        return labels[static_cast<std::size_t>(y) * w + x];
    };

    // First pass: provisional labels from the already visited neighbors.
    DisjointSets sets;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!bits.at(x, y)) continue;
            int neighbors[4];
            int count = 0;
            neighbors[count++] = label_at(x - 1, y);
            neighbors[count++] = label_at(x, y - 1);
            if (connectivity == 8) {
                neighbors[count++] = label_at(x - 1, y - 1);
                neighbors[count++] = label_at(x + 1, y - 1);
            }
            int label = -1;
            for (int i = 0; i < count; ++i) {
                if (neighbors[i] < 0) continue;
                if (label < 0) {
                    label = neighbors[i];
                } else {
                    sets.unite(label, neighbors[i]);
                }
            }
            labels[static_cast<std::size_t>(y) * w + x] = label < 0 ? sets.make() : label;
        }
    }

    // Second pass: roots are the smallest provisional label, so the first
    // time a root is seen in raster order fixes the component order.
    std::vector<int> slot_of_root;
    std::vector<Component> comps;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int l = labels[static_cast<std::size_t>(y) * w + x];
            if (l < 0) continue;
            const int root = sets.find(l);
            if (static_cast<std::size_t>(root) >= slot_of_root.size()) slot_of_root.resize(root + 1, -1);
            if (slot_of_root[root] < 0) {
                slot_of_root[root] = static_cast<int>(comps.size());
                comps.emplace_back();
            }
            comps[slot_of_root[root]].pixels.push_back({x, y});
        }
    }
    return comps;
}

DetectionSet components_to_detections(const std::vector<Component>& comps, const PriorMap& map,
                                      int min_area, ImageId image_id) {
    DetectionSet out;
    for (const auto& c : comps) {
        if (c.pixels.empty() || static_cast<int>(c.pixels.size()) < min_area) continue;
        int x0 = std::numeric_limits<int>::max(), y0 = x0;
        int x1 = std::numeric_limits<int>::min(), y1 = x1;
        double score = 0.0;
        bool first = true;
        for (const auto& p : c.pixels) {
            x0 = std::min(x0, p.x);
            y0 = std::min(y0, p.y);
            x1 = std::max(x1, p.x);
            y1 = std::max(y1, p.y);
            const double v = map.at(p.x, p.y);
            score = first ? v : std::max(score, v);
            first = false;
        }
        out.push_back({image_id,
                       {static_cast<double>(x0), static_cast<double>(y0), static_cast<double>(x1 - x0 + 1),
                        static_cast<double>(y1 - y0 + 1)},
                       score});
    }
    return out;
}

DetectionSet scene_filter(const DetectionSet& dets, const SceneMask& scene) {
    DetectionSet out;
    for (const auto& d : dets) {
        if (d.bbox.x < 0.0 || d.bbox.y < 0.0 || d.bbox.x + d.bbox.w > scene.width() ||
            d.bbox.y + d.bbox.h > scene.height()) {
            throw Error(ErrorCode::DimensionMismatch, "detection box extends beyond the scene mask");
        }
        const Pixel c = center_pixel(d.bbox, scene.width(), scene.height());
        if (!scene.is_background(c.x, c.y)) out.push_back(d);
    }
    return out;
}

DetectionSet detect_pipeline(const GrayImage& img, const SseConfig& sse_cfg, const DetectConfig& det_cfg,
                             const SceneMask* scene, ImageId image_id) {
    sse_cfg.validate();
    det_cfg.validate();
    if (scene && (scene->width() != img.width() || scene->height() != img.height())) {
        throw Error(ErrorCode::DimensionMismatch, "scene mask does not match the image dimensions");
    }
    const PriorMap prior = sse_multi_scale(img, sse_cfg.scales, sse_cfg.epsilon);
    const BinaryMap bits = threshold_map(prior, det_cfg.threshold);
    DetectionSet dets = components_to_detections(connected_components(bits, det_cfg.connectivity), prior,
                                                 det_cfg.min_area, image_id);
    if (scene && det_cfg.scene_filtering) dets = scene_filter(dets, *scene);
    return dets;
}

}  // namespace shipprior
