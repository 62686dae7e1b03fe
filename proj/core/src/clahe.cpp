#include "retseg/clahe.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace retseg {

namespace {

constexpr int kBins = 256;

inline int bin_of(double v) {
    int b = static_cast<int>(v * kBins);
    return std::clamp(b, 0, kBins - 1);
}

// Reflected index into [0, n): ... 2 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
inline int reflect(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n;
    i = ((i % period) + period) % period;
    return i < n ? i : period - 1 - i;
}

// Clip histogram at `limit` per bin, redistributing the excess uniformly.
// Repeats while redistribution pushes bins back over the limit; the loop
// terminates because the excess strictly decreases (leftover is spread on
// the final pass regardless).
void clip_histogram(std::vector<double>& hist, double limit) {
    for (int pass = 0; pass < 16; ++pass) {
        double excess = 0.0;
        for (double& b : hist) {
            if (b > limit) {
                excess += b - limit;
                b = limit;
            }
        }
        if (excess <= 0.0) return;
        const double share = excess / kBins;
        bool over = false;
        for (double& b : hist) {
            b += share;
            over = over || b > limit + 1e-12;
        }
        if (!over) return;
    }
}

} // namespace

RasterImage clahe(const RasterImage& img, const ClaheParams& p) {
    p.validate();
    const int w = img.width(), h = img.height();
    if (p.tiles_x > w || p.tiles_y > h)
        throw invalid_argument("clahe: tile grid larger than image");

    const int tw = (w + p.tiles_x - 1) / p.tiles_x;
    const int th = (h + p.tiles_y - 1) / p.tiles_y;
    const double tile_count = static_cast<double>(tw) * th;

    // Per-tile lookup tables: bin -> equalized value in [0,1].
    std::vector<std::vector<double>> luts(static_cast<size_t>(p.tiles_x) * p.tiles_y);
    for (int ty = 0; ty < p.tiles_y; ++ty) {
        for (int tx = 0; tx < p.tiles_x; ++tx) {
            std::vector<double> hist(kBins, 0.0);
            int occupied = 0, only_bin = 0;
            double tile_sum = 0.0;
            for (int y = 0; y < th; ++y) {
                const int sy = reflect(ty * th + y, h);
                for (int x = 0; x < tw; ++x) {
                    const int sx = reflect(tx * tw + x, w);
                    const double v = img.at(sx, sy);
                    const int b = bin_of(v);
                    if (hist[b] == 0.0) { ++occupied; only_bin = b; }
                    hist[b] += 1.0;
                    tile_sum += v;
                }
            }
            std::vector<double>& lut = luts[static_cast<size_t>(ty) * p.tiles_x + tx];
            lut.assign(kBins, 0.0);
            if (occupied <= 1) {
                // Single-level tile: equalization carries no information; its
                // level passes through unchanged, other bins map to their
                // centers so blending with neighbor tiles stays sane.
                for (int b = 0; b < kBins; ++b) lut[b] = (b + 0.5) / kBins;
                lut[only_bin] = tile_sum / tile_count;
            } else {
                clip_histogram(hist, p.clip_limit * tile_count);
                double cum = 0.0;
                const double total = [&] {
                    double t = 0.0;
                    for (double v : hist) t += v;
                    return t;
                }();
                for (int b = 0; b < kBins; ++b) {
                    cum += hist[b];
                    lut[b] = cum / total;
                }
            }
        }
    }

    // Bilinear blend between the four nearest tile mappings (tile centers).
    RasterImage out(w, h);
    for (int y = 0; y < h; ++y) {
        const double gy = (y + 0.5) / th - 0.5;
        int ty0 = static_cast<int>(std::floor(gy));
        double fy = gy - ty0;
        if (ty0 < 0) { ty0 = 0; fy = 0.0; }
        if (ty0 > p.tiles_y - 1) { ty0 = p.tiles_y - 1; fy = 0.0; }
        const int ty1 = std::min(ty0 + 1, p.tiles_y - 1);
        for (int x = 0; x < w; ++x) {
            const double gx = (x + 0.5) / tw - 0.5;
            int tx0 = static_cast<int>(std::floor(gx));
            double fx = gx - tx0;
            if (tx0 < 0) { tx0 = 0; fx = 0.0; }
            if (tx0 > p.tiles_x - 1) { tx0 = p.tiles_x - 1; fx = 0.0; }
            const int tx1 = std::min(tx0 + 1, p.tiles_x - 1);

            const int b = bin_of(img.at(x, y));
            const double v00 = luts[static_cast<size_t>(ty0) * p.tiles_x + tx0][b];
            const double v10 = luts[static_cast<size_t>(ty0) * p.tiles_x + tx1][b];
            const double v01 = luts[static_cast<size_t>(ty1) * p.tiles_x + tx0][b];
            const double v11 = luts[static_cast<size_t>(ty1) * p.tiles_x + tx1][b];
            const double top = v00 + fx * (v10 - v00);
            const double bot = v01 + fx * (v11 - v01);
            out.at(x, y) = std::clamp(top + fy * (bot - top), 0.0, 1.0);
        }
    }
    return out;
}

} // namespace retseg
