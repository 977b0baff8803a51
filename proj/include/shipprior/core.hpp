/**
 * @file core.hpp
 * @brief Shared value types for the ship-prior toolkit.
 *
 * Coordinates: origin at the top-left, x grows rightward, y grows downward,
 * pixel centers sit on integer coordinates. A box (x, y, w, h) contains the
 * pixel (px, py) iff x <= px < x + w and y <= py < y + h.
 */
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace shipprior {

enum class ErrorCode {
    Ok = 0,
    DimensionMismatch,
    NonFiniteValue,
    EmptySet,
    EpochOutOfRange,
    ParamOutOfRange,
    UnknownImageId,
    InvalidConfig,
};

const char* to_string(ErrorCode code);

/// Exception carrying one of the domain error codes.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Checks the raw parts of a raster without building one.
ErrorCode validate_image(std::size_t width, std::size_t height, std::span<const double> data);

/**
 * Single-channel intensity raster, row-major. Construction validates the
 * invariants, so every live GrayImage has finite values and a matching
 * data length.
 */
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, double fill = 0.0);
    GrayImage(int width, int height, std::vector<double> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double at(int x, int y) const { return data_[index(x, y)]; }
    double& at(int x, int y) { return data_[index(x, y)]; }

    /// Nearest-edge clamped read.
    double clamped(int x, int y) const;

    std::span<const double> pixels() const noexcept { return data_; }
    std::span<double> pixels() noexcept { return data_; }
    std::span<const double> row(int y) const {
        return std::span<const double>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
    }

    bool same_shape(const GrayImage& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

struct BBox {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    bool valid() const noexcept { return w > 0.0 && h > 0.0; }
    double center_x() const noexcept { return x + w / 2.0; }
    double center_y() const noexcept { return y + h / 2.0; }
    friend bool operator==(const BBox&, const BBox&) = default;
};

double bbox_area(const BBox& b);

/// Clip to [0, width) x [0, height). The result may be degenerate.
BBox clip_bbox(const BBox& b, int width, int height);

/// Integer pixel span [x0, x1) x [y0, y1) of pixels whose centers fall inside b, clipped.
struct PixelRect {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    bool empty() const noexcept { return x1 <= x0 || y1 <= y0; }
};
PixelRect rasterize(const BBox& b, int width, int height);

/// The pixel holding the box center (floor of each coordinate), clamped into the image.
struct Pixel {
    int x = 0;
    int y = 0;
    friend bool operator==(const Pixel&, const Pixel&) = default;
};
Pixel center_pixel(const BBox& b, int width, int height);

using ImageId = std::int64_t;

struct Annotation {
    ImageId image_id = 0;
    BBox bbox;
    std::string category = "ship";
};

struct Detection {
    ImageId image_id = 0;
    BBox bbox;
    double score = 0.0;
};

using DetectionSet = std::vector<Detection>;

struct ImageRecord {
    ImageId id = 0;
    std::string file;
    int width = 0;
    int height = 0;
};

/// Images plus their ground-truth boxes.
struct AnnotationSet {
    std::vector<ImageRecord> images;
    std::vector<Annotation> annotations;

    const ImageRecord* find_image(ImageId id) const;
    const ImageRecord* find_file(const std::string& file) const;
    std::vector<Annotation> for_image(ImageId id) const;
    /// Throws UnknownImageId for dangling references, InvalidConfig for bad boxes.
    void validate() const;
};

/// Divide every score by the set maximum (floored at epsilon). Throws EmptySet.
DetectionSet normalize_scores(const DetectionSet& dets, double epsilon = 1e-12);

enum class SceneLabel : std::uint8_t { Sea = 0, Land = 1, Cloud = 2 };

class SceneMask {
public:
    SceneMask() = default;
    SceneMask(int width, int height, SceneLabel fill = SceneLabel::Sea);
    SceneMask(int width, int height, std::vector<std::uint8_t> labels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    SceneLabel at(int x, int y) const {
        return static_cast<SceneLabel>(labels_[static_cast<std::size_t>(y) * width_ + x]);
    }
    void set(int x, int y, SceneLabel label) {
        labels_[static_cast<std::size_t>(y) * width_ + x] = static_cast<std::uint8_t>(label);
    }
    /// True for land and cloud, the scenes a ship cannot occupy.
    bool is_background(int x, int y) const { return at(x, y) != SceneLabel::Sea; }
    std::span<const std::uint8_t> labels() const noexcept { return labels_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> labels_;
};

enum class TrimapLabel : std::uint8_t { Unknown = 0, Positive = 1, Negative = 2 };

class Trimap {
public:
    Trimap() = default;
    Trimap(int width, int height);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    TrimapLabel at(int x, int y) const {
        return static_cast<TrimapLabel>(labels_[static_cast<std::size_t>(y) * width_ + x]);
    }
    void set(int x, int y, TrimapLabel label) {
        labels_[static_cast<std::size_t>(y) * width_ + x] = static_cast<std::uint8_t>(label);
    }
    std::span<const std::uint8_t> labels() const noexcept { return labels_; }
    std::size_t count(TrimapLabel label) const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> labels_;
};

struct SseConfig {
    std::vector<int> scales{1, 2, 3};
    std::uint32_t alpha1 = 256;
    std::uint32_t alpha2 = 256;
    double epsilon = 1e-6;
    std::uint32_t q_max = 65535;

    void validate() const;
};

enum class Encoding { Linear, Square };

/// Eight compass directions clockwise from east, so i and i + 4 are opposites.
inline constexpr std::array<Pixel, 8> kDirections{{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1},
}};

struct GradConfig {
    std::array<double, 8> weights{0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125};
    int dilation = 1;
    std::vector<Encoding> encodings{Encoding::Linear, Encoding::Square};

    void validate() const;
};

struct ScheduleConfig {
    double beta = 0.8;
    int total_epochs = 150;

    void validate() const;
};

}  // namespace shipprior
