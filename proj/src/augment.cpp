#include "shipprior/augment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

namespace shipprior {

double schedule_ratio(int epoch, const ScheduleConfig& cfg) {
    cfg.validate();
    if (epoch < 0 || epoch > cfg.total_epochs) {
        throw Error(ErrorCode::EpochOutOfRange,
                    "epoch " + std::to_string(epoch) + " outside [0, " + std::to_string(cfg.total_epochs) + "]");
    }
    const double progress = static_cast<double>(epoch) / static_cast<double>(cfg.total_epochs);
    return 1.0 - cfg.beta * progress * progress;
}

std::size_t augmented_count(double ratio, std::size_t n_samples) {
    return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n_samples) + 0.5));
}

std::size_t EpochPlan::augmented() const {
    return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
}

EpochPlan plan_epoch(int epoch, std::size_t n_samples, const ScheduleConfig& cfg, std::uint64_t seed) {
    if (n_samples == 0) throw Error(ErrorCode::ParamOutOfRange, "an epoch needs at least one sample");
    EpochPlan plan;
    plan.epoch = epoch;
    plan.ratio = schedule_ratio(epoch, cfg);
    const std::size_t k = std::min(augmented_count(plan.ratio, n_samples), n_samples);

    std::vector<std::size_t> order(n_samples);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(epoch)));
    for (std::size_t i = n_samples - 1; i > 0; --i) {
        std::swap(order[i], order[rng.below(i + 1)]);
    }
    plan.flags.assign(n_samples, false);
    for (std::size_t i = 0; i < k; ++i) plan.flags[order[i]] = true;
    return plan;
}

Affine2D Affine2D::inverse() const {
    const double det = a * d - b * c;
    if (det == 0.0 || !std::isfinite(det)) throw Error(ErrorCode::ParamOutOfRange, "affine map is not invertible");
    Affine2D inv;
    inv.a = d / det;
    inv.b = -b / det;
    inv.c = -c / det;
    inv.d = a / det;
    inv.tx = -(inv.a * tx + inv.b * ty);
    inv.ty = -(inv.c * tx + inv.d * ty);
    return inv;
}

BBox transform_bbox(const BBox& box, const Affine2D& m) {
    const std::array<std::array<double, 2>, 4> corners{{
        {box.x, box.y}, {box.x + box.w, box.y}, {box.x, box.y + box.h}, {box.x + box.w, box.y + box.h},
    }};
    double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
    for (const auto& p : corners) {
        const double x = m.map_x(p[0], p[1]);
        const double y = m.map_y(p[0], p[1]);
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
    }
    return {x0, y0, x1 - x0, y1 - y0};
}

namespace {

double sample_zero_fill(const GrayImage& src, double fx, double fy) {
    const double x0f = std::floor(fx);
    const double y0f = std::floor(fy);
    const double ax = fx - x0f;
    const double ay = fy - y0f;
    const int x0 = static_cast<int>(x0f);
    const int y0 = static_cast<int>(y0f);
    auto pick = [&](int x, int y) {
        return (x < 0 || y < 0 || x >= src.width() || y >= src.height()) ? 0.0 : src.at(x, y);
    };
    return (1.0 - ay) * ((1.0 - ax) * pick(x0, y0) + ax * pick(x0 + 1, y0)) +
           ay * ((1.0 - ax) * pick(x0, y0 + 1) + ax * pick(x0 + 1, y0 + 1));
}

double sample_clamped(const GrayImage& src, double fx, double fy) {
    fx = std::clamp(fx, 0.0, static_cast<double>(src.width() - 1));
    fy = std::clamp(fy, 0.0, static_cast<double>(src.height() - 1));
    const int x0 = static_cast<int>(std::floor(fx));
    const int y0 = static_cast<int>(std::floor(fy));
    const double ax = fx - x0;
    const double ay = fy - y0;
    return (1.0 - ay) * ((1.0 - ax) * src.clamped(x0, y0) + ax * src.clamped(x0 + 1, y0)) +
           ay * ((1.0 - ax) * src.clamped(x0, y0 + 1) + ax * src.clamped(x0 + 1, y0 + 1));
}

bool in_range(double v, double lo, double hi) { return std::isfinite(v) && v >= lo && v <= hi; }

std::vector<Annotation> clip_and_drop(std::vector<Annotation> anns, double x0, double y0, double x1, double y1) {
    std::vector<Annotation> kept;
    for (auto& a : anns) {
        const double bx0 = std::max(a.bbox.x, x0);
        const double by0 = std::max(a.bbox.y, y0);
        const double bx1 = std::min(a.bbox.x + a.bbox.w, x1);
        const double by1 = std::min(a.bbox.y + a.bbox.h, y1);
        if (bx1 - bx0 < 1.0 || by1 - by0 < 1.0) continue;
        a.bbox = {bx0, by0, bx1 - bx0, by1 - by0};
        kept.push_back(std::move(a));
    }
    return kept;
}

}  // namespace

GrayImage warp_affine(const GrayImage& src, const Affine2D& forward, int out_width, int out_height) {
    const Affine2D inv = forward.inverse();
    GrayImage out(out_width, out_height);
#pragma omp parallel for schedule(static)
    for (int v = 0; v < out_height; ++v) {
        for (int u = 0; u < out_width; ++u) {
            out.at(u, v) = sample_zero_fill(src, inv.map_x(u, v), inv.map_y(u, v));
        }
    }
    return out;
}

GrayImage resize_bilinear(const GrayImage& src, int out_width, int out_height) {
    GrayImage out(out_width, out_height);
    const double sx = static_cast<double>(src.width()) / out_width;
    const double sy = static_cast<double>(src.height()) / out_height;
#pragma omp parallel for schedule(static)
    for (int v = 0; v < out_height; ++v) {
        for (int u = 0; u < out_width; ++u) {
            out.at(u, v) = sample_clamped(src, (u + 0.5) * sx - 0.5, (v + 0.5) * sy - 0.5);
        }
    }
    return out;
}

void AffineParams::validate() const {
    if (!in_range(tx, -64.0, 64.0) || !in_range(ty, -64.0, 64.0)) {
        throw Error(ErrorCode::ParamOutOfRange, "translation must lie in [-64, 64] px");
    }
    if (!in_range(rot, -10.0, 10.0)) throw Error(ErrorCode::ParamOutOfRange, "rotation must lie in [-10, 10] degrees");
    if (!in_range(shear_x, -2.0, 2.0) || !in_range(shear_y, -2.0, 2.0)) {
        throw Error(ErrorCode::ParamOutOfRange, "shear must lie in [-2, 2] degrees");
    }
    if (!in_range(scale, 0.5, 1.5)) throw Error(ErrorCode::ParamOutOfRange, "scale must lie in [0.5, 1.5]");
}

AffineParams AffineParams::sample(Rng& rng) {
    AffineParams p;
    p.tx = rng.uniform(-64.0, 64.0);
    p.ty = rng.uniform(-64.0, 64.0);
    p.rot = rng.uniform(-10.0, 10.0);
    p.shear_x = rng.uniform(-2.0, 2.0);
    p.shear_y = rng.uniform(-2.0, 2.0);
    p.scale = rng.uniform(0.5, 1.5);
    return p;
}

Affine2D affine_matrix(const AffineParams& p, int width, int height) {
    constexpr double deg = std::numbers::pi / 180.0;
    const double cs = std::cos(p.rot * deg);
    const double sn = std::sin(p.rot * deg);
    const double kx = std::tan(p.shear_x * deg);
    const double ky = std::tan(p.shear_y * deg);

    // Rotation is counter-clockwise as displayed (y grows downward).
    const double r00 = cs * p.scale, r01 = sn * p.scale;
    const double r10 = -sn * p.scale, r11 = cs * p.scale;

    Affine2D m;
    m.a = r00 + kx * r10;
    m.b = r01 + kx * r11;
    m.c = ky * r00 + r10;
    m.d = ky * r01 + r11;

    const double cx = (width - 1) / 2.0;
    const double cy = (height - 1) / 2.0;
    m.tx = cx - (m.a * cx + m.b * cy) + p.tx;
    m.ty = cy - (m.c * cx + m.d * cy) + p.ty;
    return m;
}

Sample apply_affine(const GrayImage& img, std::span<const Annotation> annotations, const AffineParams& p) {
    p.validate();
    const Affine2D m = affine_matrix(p, img.width(), img.height());
    Sample out;
    out.image = warp_affine(img, m, img.width(), img.height());
    std::vector<Annotation> moved(annotations.begin(), annotations.end());
    for (auto& a : moved) a.bbox = transform_bbox(a.bbox, m);
    out.annotations = clip_and_drop(std::move(moved), 0.0, 0.0, img.width(), img.height());
    return out;
}

Sample mosaic(std::span<const Sample> inputs, std::uint64_t seed, const MosaicOptions& opts) {
    if (inputs.size() != 4) throw Error(ErrorCode::ParamOutOfRange, "mosaic takes exactly four inputs");
    const int width = opts.width > 0 ? opts.width : inputs[0].image.width();
    const int height = opts.height > 0 ? opts.height : inputs[0].image.height();
    if (width < 2 || height < 2) throw Error(ErrorCode::DimensionMismatch, "mosaic canvas must be at least 2x2");

    Rng rng(seed);
    Pixel split;
    if (opts.center) {
        split = *opts.center;
        if (split.x < 0 || split.y < 0 || split.x > width || split.y > height) {
            throw Error(ErrorCode::ParamOutOfRange, "mosaic center outside the canvas");
        }
    } else {
        split.x = rng.between(width / 4, (3 * width) / 4);
        split.y = rng.between(height / 4, (3 * height) / 4);
    }

    Sample out;
    out.image = GrayImage(width, height);
    for (std::size_t k = 0; k < 4; ++k) {
        const Sample& in = inputs[k];
        const double factor = rng.uniform(0.5, 1.5);
        const int sw = std::max(1, static_cast<int>(std::lround(in.image.width() * factor)));
        const int sh = std::max(1, static_cast<int>(std::lround(in.image.height() * factor)));
        const GrayImage scaled = resize_bilinear(in.image, sw, sh);

        const bool right = k == 1 || k == 3;
        const bool bottom = k >= 2;
        const int ox = right ? split.x : split.x - sw;
        const int oy = bottom ? split.y : split.y - sh;
        const int qx0 = right ? split.x : 0, qx1 = right ? width : split.x;
        const int qy0 = bottom ? split.y : 0, qy1 = bottom ? height : split.y;

        for (int y = std::max(qy0, oy); y < std::min(qy1, oy + sh); ++y) {
            for (int x = std::max(qx0, ox); x < std::min(qx1, ox + sw); ++x) {
                out.image.at(x, y) = scaled.at(x - ox, y - oy);
            }
        }

        // Same continuous map as the resize, then the placement offset.
        Affine2D place;
        place.a = static_cast<double>(sw) / in.image.width();
        place.d = static_cast<double>(sh) / in.image.height();
        place.tx = 0.5 * place.a - 0.5 + ox;
        place.ty = 0.5 * place.d - 0.5 + oy;
        std::vector<Annotation> moved(in.annotations.begin(), in.annotations.end());
        for (auto& a : moved) {
            a.bbox = transform_bbox(a.bbox, place);
            a.image_id = opts.image_id;
        }
        for (auto& a : clip_and_drop(std::move(moved), qx0, qy0, qx1, qy1)) out.annotations.push_back(std::move(a));
    }
    return out;
}

Sample mixup(const GrayImage& a, const GrayImage& b, double lambda, std::span<const Annotation> anns_a,
             std::span<const Annotation> anns_b) {
    if (!a.same_shape(b)) throw Error(ErrorCode::DimensionMismatch, "mixup inputs differ in size");
    if (!in_range(lambda, 0.0, 1.0)) throw Error(ErrorCode::ParamOutOfRange, "mixup lambda must lie in [0, 1]");
    Sample out;
    out.image = GrayImage(a.width(), a.height());
    const auto pa = a.pixels();
    const auto pb = b.pixels();
    auto po = out.image.pixels();
    for (std::size_t k = 0; k < po.size(); ++k) po[k] = lambda * pa[k] + (1.0 - lambda) * pb[k];
    out.annotations.assign(anns_a.begin(), anns_a.end());
    out.annotations.insert(out.annotations.end(), anns_b.begin(), anns_b.end());
    return out;
}

}  // namespace shipprior
