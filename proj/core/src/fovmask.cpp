#include "retseg/fovmask.hpp"

#include <vector>

#include "retseg/imageio.hpp"

namespace retseg {

namespace {

// Iterative flood fill (8-connected) assigning `label` to the component of
// (sx, sy) in `labels`; returns component area.
size_t flood(const BinaryImage& mask, std::vector<int>& labels, int sx, int sy, int label) {
    const int w = mask.width(), h = mask.height();
    std::vector<std::pair<int, int>> stack{{sx, sy}};
    labels[static_cast<size_t>(sy) * w + sx] = label;
    size_t area = 0;
    while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        ++area;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                const size_t ni = static_cast<size_t>(ny) * w + nx;
                if (mask.get(ni) && labels[ni] < 0) {
                    labels[ni] = label;
                    stack.emplace_back(nx, ny);
                }
            }
        }
    }
    return area;
}

BinaryImage largest_component(const BinaryImage& mask) {
    const int w = mask.width(), h = mask.height();
    std::vector<int> labels(mask.size(), -1);
    int best_label = -1, next = 0;
    size_t best_area = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t i = static_cast<size_t>(y) * w + x;
            if (mask.get(i) && labels[i] < 0) {
                size_t area = flood(mask, labels, x, y, next);
                if (area > best_area) { best_area = area; best_label = next; }
                ++next;
            }
        }
    }
    BinaryImage out(w, h);
    if (best_label >= 0)
        for (size_t i = 0; i < out.size(); ++i) out.set(i, labels[i] == best_label);
    return out;
}

// Fill holes: everything not reachable from the border through the background
// becomes foreground.
BinaryImage fill_holes(const BinaryImage& mask) {
    const int w = mask.width(), h = mask.height();
    BinaryImage bg(w, h);
    for (size_t i = 0; i < bg.size(); ++i) bg.set(i, !mask.get(i));
    std::vector<int> labels(bg.size(), -1);
    int next = 0;
    std::vector<bool> touches_border;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t i = static_cast<size_t>(y) * w + x;
            if (bg.get(i) && labels[i] < 0) {
                flood(bg, labels, x, y, next);
                touches_border.push_back(false);
                ++next;
            }
        }
    }
    for (int x = 0; x < w; ++x) {
        if (labels[x] >= 0) touches_border[labels[x]] = true;
        const size_t i = static_cast<size_t>(h - 1) * w + x;
        if (labels[i] >= 0) touches_border[labels[i]] = true;
    }
    for (int y = 0; y < h; ++y) {
        if (labels[static_cast<size_t>(y) * w] >= 0) touches_border[labels[static_cast<size_t>(y) * w]] = true;
        const size_t i = static_cast<size_t>(y) * w + (w - 1);
        if (labels[i] >= 0) touches_border[labels[i]] = true;
    }
    BinaryImage out(w, h);
    for (size_t i = 0; i < out.size(); ++i)
        out.set(i, mask.get(i) || (labels[i] >= 0 && !touches_border[labels[i]]));
    return out;
}

} // namespace

FovMask load_fov_mask(const std::string& path) {
    RasterImage gray = load_gray(path);
    BinaryImage m(gray.width(), gray.height());
    for (size_t i = 0; i < m.size(); ++i) m.set(i, gray[i] > 0.0);
    if (m.count_true() == 0)
        throw degenerate_error("fov mask is empty: " + path);
    return FovMask(std::move(m));
}

FovMask estimate_fov_mask(const RgbImage& img, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw invalid_argument("estimate_fov_mask: threshold must lie in (0,1)");
    BinaryImage m(img.width(), img.height());
    const RasterImage& red = img.red();
    for (size_t i = 0; i < m.size(); ++i) m.set(i, red[i] > threshold);
    if (m.count_true() == 0)
        throw degenerate_error("estimate_fov_mask: no pixel clears the threshold");
    return FovMask(fill_holes(largest_component(m)));
}

RasterImage apply_fov(const RasterImage& img, const FovMask& mask) {
    if (img.width() != mask.width() || img.height() != mask.height())
        throw invalid_argument("apply_fov: mask dimensions do not match image");
    RasterImage out = img;
    for (size_t i = 0; i < out.size(); ++i)
        if (!mask.get(i)) out[i] = 0.0;
    return out;
}

} // namespace retseg
