#include "retseg/background.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace retseg {

namespace {

inline int quantize(double v) {
    const int q = static_cast<int>(v * 255.0 + 0.5);
    return std::clamp(q, 0, 255);
}

// Histogram median: order statistic at index (count-1)/2, i.e. the lower of
// the two middle values for even counts.
inline int histogram_median(const std::array<int, 256>& hist, int count) {
    const int target = (count - 1) / 2;
    int cum = 0;
    for (int b = 0; b < 256; ++b) {
        cum += hist[b];
        if (cum > target) return b;
    }
    return 255;
}

} // namespace

RasterImage estimate_background(const RasterImage& weighted, const BackgroundParams& p) {
    p.validate();
    const int w = weighted.width(), h = weighted.height();
    const int win = p.median_window;
    if (win > std::min(w, h))
        throw invalid_argument("background: median window exceeds image dimensions");

    // Window rows/cols relative to the output pixel: [-win/2, win/2) for even
    // windows, [-win/2, win/2] for odd.
    const int lo = -(win / 2);
    const int hi = lo + win - 1;
    const int count = win * win;

    std::vector<int> q(weighted.size());
    for (size_t i = 0; i < q.size(); ++i) q[i] = quantize(weighted[i]);
    auto sample = [&](int x, int y) {
        x = std::clamp(x, 0, w - 1);
        y = std::clamp(y, 0, h - 1);
        return q[static_cast<size_t>(y) * w + x];
    };

    RasterImage out(w, h);
    // Slide the histogram along each row: O(win) updates per pixel.
    for (int y = 0; y < h; ++y) {
        std::array<int, 256> hist{};
        for (int dy = lo; dy <= hi; ++dy)
            for (int dx = lo; dx <= hi; ++dx)
                ++hist[sample(dx, y + dy)];
        out.at(0, y) = histogram_median(hist, count) / 255.0;
        for (int x = 1; x < w; ++x) {
            for (int dy = lo; dy <= hi; ++dy) {
                --hist[sample(x - 1 + lo, y + dy)];
                ++hist[sample(x + hi, y + dy)];
            }
            out.at(x, y) = histogram_median(hist, count) / 255.0;
        }
    }
    return out;
}

BinaryImage threshold_mask(const RasterImage& weighted, const RasterImage& bg) {
    if (!weighted.same_dims(bg))
        throw invalid_argument("threshold_mask: dimension mismatch");
    BinaryImage out(weighted.width(), weighted.height());
    for (size_t i = 0; i < out.size(); ++i)
        out.set(i, weighted[i] - bg[i] <= 0.0);
    return out;
}

RasterImage remove_od(const RasterImage& edge, const BinaryImage& t) {
    if (edge.width() != t.width() || edge.height() != t.height())
        throw invalid_argument("remove_od: dimension mismatch");
    RasterImage out(edge.width(), edge.height());
    for (size_t i = 0; i < out.size(); ++i) {
        const double d = edge[i] - (t.get(i) ? 1.0 : 0.0);
        out[i] = 1.0 - std::clamp(d, 0.0, 1.0);
    }
    return out;
}

RasterImage remove_od_residual(const RasterImage& edge, const RasterImage& weighted,
                               const RasterImage& bg) {
    if (!edge.same_dims(weighted) || !edge.same_dims(bg))
        throw invalid_argument("remove_od_residual: dimension mismatch");
    RasterImage out(edge.width(), edge.height());
    for (size_t i = 0; i < out.size(); ++i) {
        const double residual = std::min(weighted[i] - bg[i], 0.0);
        out[i] = 1.0 - std::clamp(edge[i] - residual, 0.0, 1.0);
    }
    return out;
}

} // namespace retseg
