#include "shipprior/integral.hpp"

#include <algorithm>

namespace shipprior {

IntegralTable::IntegralTable(const GrayImage& img)
    : width_(img.width()), height_(img.height()),
      sums_(static_cast<std::size_t>(img.width() + 1) * static_cast<std::size_t>(img.height() + 1), 0.0) {
    const std::size_t s = stride();
    for (int y = 0; y < height_; ++y) {
        const auto src = img.row(y);
        const double* above = &sums_[static_cast<std::size_t>(y) * s];
        double* out = &sums_[static_cast<std::size_t>(y + 1) * s];
        double row_sum = 0.0;
        for (int x = 0; x < width_; ++x) {
            row_sum += src[x];
            out[x + 1] = above[x + 1] + row_sum;
        }
    }
}

IntegralTable build_integral(const GrayImage& img) { return IntegralTable(img); }

double IntegralTable::rect_sum(int x0, int y0, int x1, int y1) const {
    x0 = std::clamp(x0, 0, width_ - 1);
    x1 = std::clamp(x1, 0, width_ - 1);
    y0 = std::clamp(y0, 0, height_ - 1);
    y1 = std::clamp(y1, 0, height_ - 1);
    return at(x1 + 1, y1 + 1) - at(x0, y1 + 1) - at(x1 + 1, y0) + at(x0, y0);
}

double IntegralTable::rect_mean(int x0, int y0, int x1, int y1) const {
    const int cx0 = std::clamp(x0, 0, width_ - 1);
    const int cx1 = std::clamp(x1, 0, width_ - 1);
    const int cy0 = std::clamp(y0, 0, height_ - 1);
    const int cy1 = std::clamp(y1, 0, height_ - 1);
    const double count = static_cast<double>(cx1 - cx0 + 1) * static_cast<double>(cy1 - cy0 + 1);
    return rect_sum(cx0, cy0, cx1, cy1) / count;
}

double IntegralTable::patch_mean(int cx, int cy, int n) const {
    const int x0 = patch_origin(cx, n);
    const int y0 = patch_origin(cy, n);
    return rect_mean(x0, y0, x0 + n - 1, y0 + n - 1);
}

}  // namespace shipprior
