#include "shipprior/core.hpp"

#include <algorithm>
#include <cmath>

namespace shipprior {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::Ok: return "Ok";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::EmptySet: return "EmptySet";
        case ErrorCode::EpochOutOfRange: return "EpochOutOfRange";
        case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
        case ErrorCode::UnknownImageId: return "UnknownImageId";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

ErrorCode validate_image(std::size_t width, std::size_t height, std::span<const double> data) {
    if (width == 0 || height == 0 || data.size() != width * height) {
        return ErrorCode::DimensionMismatch;
    }
    for (double v : data) {
        if (!std::isfinite(v)) return ErrorCode::NonFiniteValue;
    }
    return ErrorCode::Ok;
}

GrayImage::GrayImage(int width, int height, double fill)
    : GrayImage(width, height,
                std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                        static_cast<std::size_t>(std::max(height, 0)),
                                    fill)) {}

GrayImage::GrayImage(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (width <= 0 || height <= 0) {
        throw Error(ErrorCode::DimensionMismatch, "image dimensions must be positive");
    }
    const auto status = validate_image(static_cast<std::size_t>(width),
                                       static_cast<std::size_t>(height), data_);
    if (status != ErrorCode::Ok) {
        throw Error(status, "invalid " + std::to_string(width) + "x" + std::to_string(height) +
                                " image");
    }
}

double GrayImage::clamped(int x, int y) const {
    x = std::clamp(x, 0, width_ - 1);
    y = std::clamp(y, 0, height_ - 1);
    return data_[index(x, y)];
}

double bbox_area(const BBox& b) { return b.w * b.h; }

BBox clip_bbox(const BBox& b, int width, int height) {
    const double x0 = std::clamp(b.x, 0.0, static_cast<double>(width));
    const double y0 = std::clamp(b.y, 0.0, static_cast<double>(height));
    const double x1 = std::clamp(b.x + b.w, 0.0, static_cast<double>(width));
    const double y1 = std::clamp(b.y + b.h, 0.0, static_cast<double>(height));
    return {x0, y0, x1 - x0, y1 - y0};
}

PixelRect rasterize(const BBox& b, int width, int height) {
    auto first_inside = [](double lo) { return static_cast<int>(std::ceil(lo)); };
    PixelRect r;
    r.x0 = std::clamp(first_inside(b.x), 0, width);
    r.y0 = std::clamp(first_inside(b.y), 0, height);
    r.x1 = std::clamp(first_inside(b.x + b.w), 0, width);
    r.y1 = std::clamp(first_inside(b.y + b.h), 0, height);
    return r;
}

Pixel center_pixel(const BBox& b, int width, int height) {
    const int cx = static_cast<int>(std::floor(b.x + b.w / 2.0));
    const int cy = static_cast<int>(std::floor(b.y + b.h / 2.0));
    return {std::clamp(cx, 0, width - 1), std::clamp(cy, 0, height - 1)};
}

DetectionSet normalize_scores(const DetectionSet& dets, double epsilon) {
    if (dets.empty()) throw Error(ErrorCode::EmptySet, "cannot normalize an empty detection set");
    double top = epsilon;
    for (const auto& d : dets) top = std::max(top, d.score);
    DetectionSet out = dets;
    for (auto& d : out) d.score /= top;
    return out;
}

const ImageRecord* AnnotationSet::find_image(ImageId id) const {
    for (const auto& img : images) {
        if (img.id == id) return &img;
    }
    return nullptr;
}

const ImageRecord* AnnotationSet::find_file(const std::string& file) const {
    for (const auto& img : images) {
        if (img.file == file) return &img;
    }
    return nullptr;
}

std::vector<Annotation> AnnotationSet::for_image(ImageId id) const {
    std::vector<Annotation> out;
    for (const auto& a : annotations) {
        if (a.image_id == id) out.push_back(a);
    }
    return out;
}

void AnnotationSet::validate() const {
    for (std::size_t i = 0; i < images.size(); ++i) {
        for (std::size_t j = i + 1; j < images.size(); ++j) {
            if (images[i].id == images[j].id) {
                throw Error(ErrorCode::InvalidConfig, "duplicate image id " + std::to_string(images[i].id));
            }
        }
    }
    for (const auto& a : annotations) {
        if (!find_image(a.image_id)) {
            throw Error(ErrorCode::UnknownImageId, "annotation refers to image " + std::to_string(a.image_id));
        }
        if (!a.bbox.valid()) throw Error(ErrorCode::InvalidConfig, "annotation box must have w > 0 and h > 0");
    }
}

SceneMask::SceneMask(int width, int height, SceneLabel fill)
    : SceneMask(width, height,
                std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                              static_cast<std::size_t>(std::max(height, 0)),
                                          static_cast<std::uint8_t>(fill))) {}

SceneMask::SceneMask(int width, int height, std::vector<std::uint8_t> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
    if (width <= 0 || height <= 0 ||
        labels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw Error(ErrorCode::DimensionMismatch, "scene mask size does not match its dimensions");
    }
    for (auto v : labels_) {
        if (v > 2) throw Error(ErrorCode::InvalidConfig, "scene label outside {0,1,2}");
    }
}

Trimap::Trimap(int width, int height) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
        throw Error(ErrorCode::DimensionMismatch, "trimap dimensions must be positive");
    }
    labels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                   static_cast<std::uint8_t>(TrimapLabel::Unknown));
}

std::size_t Trimap::count(TrimapLabel label) const {
    return static_cast<std::size_t>(
        std::count(labels_.begin(), labels_.end(), static_cast<std::uint8_t>(label)));
}

void SseConfig::validate() const {
    if (scales.empty()) throw Error(ErrorCode::InvalidConfig, "at least one SSE scale is required");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] < 1) throw Error(ErrorCode::InvalidConfig, "SSE scales must be >= 1");
        if (i > 0 && scales[i] <= scales[i - 1]) {
            throw Error(ErrorCode::InvalidConfig, "SSE scales must be strictly increasing");
        }
    }
    if (alpha1 < 2 || alpha2 < 2) throw Error(ErrorCode::InvalidConfig, "alpha1 and alpha2 must be >= 2");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw Error(ErrorCode::InvalidConfig, "epsilon must be a positive finite number");
    }
}

void GradConfig::validate() const {
    for (double w : weights) {
        if (!std::isfinite(w)) throw Error(ErrorCode::InvalidConfig, "gradient weights must be finite");
    }
    if (dilation < 1) throw Error(ErrorCode::InvalidConfig, "dilation must be >= 1");
    if (encodings.empty()) throw Error(ErrorCode::InvalidConfig, "at least one encoding is required");
}

void ScheduleConfig::validate() const {
    if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorCode::InvalidConfig, "beta must lie in (0, 1)");
    if (total_epochs < 1) throw Error(ErrorCode::InvalidConfig, "total epochs must be >= 1");
}

}  // namespace shipprior
