#include "shipprior/gradbank.hpp"

namespace shipprior {

DirectionalMaps directional_diffs(const GrayImage& img, int dilation) {
    if (dilation < 1) throw Error(ErrorCode::InvalidConfig, "dilation must be >= 1");
    DirectionalMaps maps;
    for (std::size_t i = 0; i < 8; ++i) {
        GrayImage g(img.width(), img.height());
        const int ox = kDirections[i].x * dilation;
        const int oy = kDirections[i].y * dilation;
#pragma omp parallel for schedule(static)
        for (int y = 0; y < img.height(); ++y) {
            for (int x = 0; x < img.width(); ++x) g.at(x, y) = img.clamped(x + ox, y + oy) - img.at(x, y);
        }
        maps[i] = std::move(g);
    }
    return maps;
}

GrayImage fuse(const DirectionalMaps& maps, const std::array<double, 8>& weights) {
    for (const auto& m : maps) {
        if (!m.same_shape(maps[0])) throw Error(ErrorCode::DimensionMismatch, "directional maps differ in size");
    }
    GrayImage out(maps[0].width(), maps[0].height());
#pragma omp parallel for schedule(static)
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) {
            double acc = 0.0;
            for (std::size_t i = 0; i < 8; ++i) acc += weights[i] * maps[i].at(x, y);
            out.at(x, y) = acc;
        }
    }
    return out;
}

GrayImage apply_equivalent_kernel(const GrayImage& img, const std::array<double, 8>& weights, int dilation) {
    if (dilation < 1) throw Error(ErrorCode::InvalidConfig, "dilation must be >= 1");
    double center = 0.0;
    for (double w : weights) center -= w;
    GrayImage out(img.width(), img.height());
#pragma omp parallel for schedule(static)
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double acc = center * img.at(x, y);
            for (std::size_t i = 0; i < 8; ++i) {
                acc += weights[i] * img.clamped(x + kDirections[i].x * dilation, y + kDirections[i].y * dilation);
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

const GrayImage* GradientFeatures::find(const std::string& name) const {
    for (const auto& c : channels) {
        if (c.name == name) return &c.data;
    }
    return nullptr;
}

GradientFeatures gradient_features(const GrayImage& img, const GradConfig& cfg) {
    cfg.validate();
    GradientFeatures f;
    f.width = img.width();
    f.height = img.height();
    GrayImage fused = fuse(directional_diffs(img, cfg.dilation), cfg.weights);
    f.channels.push_back({"fused", fused});
    for (Encoding e : cfg.encodings) {
        if (e == Encoding::Linear) {
            f.channels.push_back({"linear", fused});
        } else {
            GrayImage sq = fused;
            for (double& v : sq.pixels()) v *= v;
            f.channels.push_back({"square", std::move(sq)});
        }
    }
    return f;
}

}  // namespace shipprior
