#include "shipprior_ref/naive_sse.hpp"

#include <algorithm>
#include <cmath>

namespace shipprior::reference {

double naive_patch_mean(const GrayImage& img, int cx, int cy, int n) {
    // Same anchoring as the accelerated path: first pixel at c - n / 2.
    int x0 = cx - n / 2, x1 = x0 + n - 1;
    int y0 = cy - n / 2, y1 = y0 + n - 1;
    x0 = std::clamp(x0, 0, img.width() - 1);
    x1 = std::clamp(x1, 0, img.width() - 1);
    y0 = std::clamp(y0, 0, img.height() - 1);
    y1 = std::clamp(y1, 0, img.height() - 1);
    double sum = 0.0;
    int count = 0;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            sum += img.at(x, y);
            ++count;
        }
    }
    return sum / count;
}

NaiveBlock naive_block(const GrayImage& img, int cx, int cy, int n) {
    static constexpr int dx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
    static constexpr int dy[8] = {0, 1, 1, 1, 0, -1, -1, -1};
    NaiveBlock b;
    const double o = naive_patch_mean(img, cx, cy, n);
    double abs_sum = 0.0;
    for (int i = 0; i < 8; ++i) {
        b.d[i] = o - naive_patch_mean(img, cx + dx[i] * n, cy + dy[i] * n, n);
        abs_sum += std::fabs(b.d[i]);
    }
    b.v = abs_sum / 8.0;
    return b;
}

double naive_response(const GrayImage& img, int x, int y, int n, double epsilon) {
    static constexpr int dx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
    static constexpr int dy[8] = {0, 1, 1, 1, 0, -1, -1, -1};
    const NaiveBlock center = naive_block(img, x, y, n);

    std::array<double, 4> products{};
    for (int i = 0; i < 4; ++i) products[i] = center.d[i] * center.d[i + 4];
    std::sort(products.begin(), products.end());
    const double s = products[2];

    double background = 0.0;
    for (int i = 0; i < 8; ++i) background += naive_block(img, x + 3 * n * dx[i], y + 3 * n * dy[i], n).v;
    const double w = center.v / std::max(background, epsilon);
    return std::max(s * w, 0.0);
}

std::vector<double> naive_sse(const GrayImage& img, std::span<const int> scales, double epsilon) {
    std::vector<double> out(img.size(), 0.0);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double best = 0.0;
            for (std::size_t j = 0; j < scales.size(); ++j) {
                const double r = naive_response(img, x, y, scales[j], epsilon);
                best = j == 0 ? r : std::max(best, r);
            }
            out[static_cast<std::size_t>(y) * img.width() + x] = best;
        }
    }
    return out;
}

}  // namespace shipprior::reference
