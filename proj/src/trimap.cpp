#include "shipprior/trimap.hpp"

#include <cmath>

namespace shipprior {

BBox expand_bbox(const BBox& b, double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorCode::ParamOutOfRange, "expansion factor must be > 0");
    const double w = b.w * k;
    const double h = b.h * k;
    return {b.center_x() - w / 2.0, b.center_y() - h / 2.0, w, h};
}

Trimap build_trimap(std::span<const Annotation> annotations, const SceneMask& scene, double k,
                    int width, int height) {
    if (scene.width() != width || scene.height() != height) {
        throw Error(ErrorCode::DimensionMismatch, "scene mask does not match the image dimensions");
    }
    Trimap t(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (scene.is_background(x, y)) t.set(x, y, TrimapLabel::Negative);
        }
    }
    for (const auto& ann : annotations) {
        const PixelRect r = rasterize(expand_bbox(ann.bbox, k), width, height);
        for (int y = r.y0; y < r.y1; ++y) {
            for (int x = r.x0; x < r.x1; ++x) t.set(x, y, TrimapLabel::Positive);
        }
    }
    return t;
}

}  // namespace shipprior
