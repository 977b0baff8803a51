#include "shipprior/sse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shipprior {

namespace {

// Raster indexed by coordinates in [-margin, extent + margin).
class PaddedGrid {
public:
    PaddedGrid(int width, int height, int margin)
        : margin_(margin), stride_(width + 2 * margin), rows_(height + 2 * margin),
          data_(static_cast<std::size_t>(stride_) * rows_, 0.0) {}

    int margin() const noexcept { return margin_; }
    int stride() const noexcept { return stride_; }
    int rows() const noexcept { return rows_; }

    double at(int x, int y) const { return data_[offset(x, y)]; }
    double& at(int x, int y) { return data_[offset(x, y)]; }
    const double* ptr(int x, int y) const { return data_.data() + offset(x, y); }
    double* ptr(int x, int y) { return data_.data() + offset(x, y); }

    /// Pointer offsets of the eight neighbors at the given distance.
    std::array<std::ptrdiff_t, 8> neighbor_steps(int distance) const {
        std::array<std::ptrdiff_t, 8> steps;
        for (std::size_t i = 0; i < 8; ++i) {
            steps[i] = static_cast<std::ptrdiff_t>(distance) * (kDirections[i].y * stride_ + kDirections[i].x);
        }
        return steps;
    }

private:
    std::size_t offset(int x, int y) const noexcept {
        return static_cast<std::size_t>(y + margin_) * stride_ + (x + margin_);
    }

    int margin_;
    int stride_;
    int rows_;
    std::vector<double> data_;
};

double mean_abs(const std::array<double, 8>& d) {
    double acc = 0.0;
    for (double v : d) acc += std::abs(v);
    return acc / 8.0;
}

}  // namespace

double PriorMap::max_value() const {
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

BlockStats block_stats(const IntegralTable& table, Pixel block_center, int n) {
    BlockStats s;
    const double center = table.patch_mean(block_center.x, block_center.y, n);
    for (std::size_t i = 0; i < 8; ++i) {
        const auto& dir = kDirections[i];
        s.d[i] = center - table.patch_mean(block_center.x + n * dir.x, block_center.y + n * dir.y, n);
    }
    s.v = mean_abs(s.d);
    return s;
}

double dissimilarity(const std::array<double, 8>& d) {
    // Second largest of four products; a repeated maximum counts twice.
    double first = d[0] * d[4];
    double second = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < 4; ++i) {
        const double p = d[i] * d[i + 4];
        if (p > first) {
            second = first;
            first = p;
        } else if (p > second) {
            second = p;
        }
    }
    return second;
}

double background_weight(double v_center, const std::array<double, 8>& v_blocks, double epsilon) {
    double total = 0.0;
    for (double v : v_blocks) total += v;
    return v_center / std::max(total, epsilon);
}

PriorMap sse_single_scale(const IntegralTable& table, int n, double epsilon) {
    if (n < 1) throw Error(ErrorCode::InvalidConfig, "patch edge must be >= 1");
    const int width = table.width();
    const int height = table.height();

    // Patch means for every patch center any window can reach (offsets up to 4n),
    // then block variations for every block center (offsets up to 3n).
    PaddedGrid means(width, height, 4 * n);
    const int m_lo = -means.margin();
#pragma omp parallel for schedule(static)
    for (int row = 0; row < means.rows(); ++row) {
        const int y = row + m_lo;
        for (int x = m_lo; x < width + means.margin(); ++x) means.at(x, y) = table.patch_mean(x, y, n);
    }

    PaddedGrid variation(width, height, 3 * n);
    const int v_lo = -variation.margin();
    const auto near = means.neighbor_steps(n);
#pragma omp parallel for schedule(static)
    for (int row = 0; row < variation.rows(); ++row) {
        const int y = row + v_lo;
        const double* m = means.ptr(v_lo, y);
        double* v = variation.ptr(v_lo, y);
        for (int x = v_lo; x < width + variation.margin(); ++x, ++m, ++v) {
            std::array<double, 8> d;
            for (std::size_t i = 0; i < 8; ++i) d[i] = *m - m[near[i]];
            *v = mean_abs(d);
        }
    }

    PriorMap out(width, height);
    const auto far = variation.neighbor_steps(3 * n);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y) {
        const double* m = means.ptr(0, y);
        const double* v = variation.ptr(0, y);
        for (int x = 0; x < width; ++x, ++m, ++v) {
            std::array<double, 8> d;
            std::array<double, 8> v_blocks;
            for (std::size_t i = 0; i < 8; ++i) {
                d[i] = *m - m[near[i]];
                v_blocks[i] = v[far[i]];
            }
            const double s = dissimilarity(d);
            const double w = background_weight(*v, v_blocks, epsilon);
            out.at(x, y) = std::max(s * w, 0.0);
        }
    }
    return out;
}

PriorMap sse_single_scale(const GrayImage& img, int n, double epsilon) {
    return sse_single_scale(build_integral(img), n, epsilon);
}

PriorMap sse_multi_scale(const GrayImage& img, std::span<const int> scales, double epsilon) {
    if (scales.empty()) throw Error(ErrorCode::InvalidConfig, "at least one SSE scale is required");
    const IntegralTable table(img);
    PriorMap out = sse_single_scale(table, scales.front(), epsilon);
    for (std::size_t j = 1; j < scales.size(); ++j) {
        const PriorMap scale_map = sse_single_scale(table, scales[j], epsilon);
        for (std::size_t k = 0; k < out.values.size(); ++k) {
            out.values[k] = std::max(out.values[k], scale_map.values[k]);
        }
    }
    return out;
}

std::uint64_t quantize_response(double c, std::uint32_t q_max) {
    const double clipped = std::clamp(c, 0.0, static_cast<double>(q_max));
    return static_cast<std::uint64_t>(std::llround(clipped));
}

EncodedPrior encode_prior(const PriorMap& prior, const GrayImage& img, const SseConfig& cfg) {
    if (prior.width != img.width() || prior.height != img.height()) {
        throw Error(ErrorCode::DimensionMismatch, "prior map and image dimensions differ");
    }
    EncodedPrior enc;
    enc.width = prior.width;
    enc.height = prior.height;
    enc.intensity = img;
    enc.low.resize(prior.values.size());
    enc.high.resize(prior.values.size());
    for (std::size_t k = 0; k < prior.values.size(); ++k) {
        const std::uint64_t q = quantize_response(prior.values[k], cfg.q_max);
        enc.low[k] = static_cast<std::uint32_t>(q % cfg.alpha1);
        enc.high[k] = static_cast<std::uint32_t>(q / cfg.alpha2);
    }
    return enc;
}

EncodedPrior sse_extract(const GrayImage& img, const SseConfig& cfg) {
    cfg.validate();
    return encode_prior(sse_multi_scale(img, cfg.scales, cfg.epsilon), img, cfg);
}

}  // namespace shipprior
