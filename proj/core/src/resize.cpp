#include "retseg/resize.hpp"

#include <algorithm>
#include <cmath>

namespace retseg {

namespace {

// Pixel-center mapping: dst center (i + 0.5) lands at src coordinate
// (i + 0.5) * scale - 0.5. Unit scale reproduces the source exactly.
inline void split_coord(double src, int limit, int& i0, int& i1, double& frac) {
    double f = std::floor(src);
    i0 = static_cast<int>(f);
    frac = src - f;
    if (i0 < 0) { i0 = 0; frac = 0.0; }
    if (i0 > limit - 1) { i0 = limit - 1; frac = 0.0; }
    i1 = std::min(i0 + 1, limit - 1);
}

// a + t (b - a): exact for t == 0 and for b == a, which keeps identity
// resizes bit-equal and constant images constant.
inline double lerp_exact(double a, double b, double t) { return a + t * (b - a); }

} // namespace

RasterImage resize_raster(const RasterImage& img, int target_w, int target_h) {
    if (target_w < 1 || target_h < 1)
        throw invalid_argument("resize: target dimensions must be >= 1");
    RasterImage out(target_w, target_h);
    const double sx = static_cast<double>(img.width()) / target_w;
    const double sy = static_cast<double>(img.height()) / target_h;
    for (int y = 0; y < target_h; ++y) {
        int y0, y1;
        double fy;
        split_coord((y + 0.5) * sy - 0.5, img.height(), y0, y1, fy);
        for (int x = 0; x < target_w; ++x) {
            int x0, x1;
            double fx;
            split_coord((x + 0.5) * sx - 0.5, img.width(), x0, x1, fx);
            const double top = lerp_exact(img.at(x0, y0), img.at(x1, y0), fx);
            const double bot = lerp_exact(img.at(x0, y1), img.at(x1, y1), fx);
            out.at(x, y) = std::clamp(lerp_exact(top, bot, fy), 0.0, 1.0);
        }
    }
    return out;
}

RgbImage resize_image(const RgbImage& img, int target_w, int target_h) {
    return RgbImage(resize_raster(img.red(), target_w, target_h),
                    resize_raster(img.green(), target_w, target_h),
                    resize_raster(img.blue(), target_w, target_h));
}

BinaryImage resize_nearest(const BinaryImage& mask, int target_w, int target_h) {
    if (target_w < 1 || target_h < 1)
        throw invalid_argument("resize: target dimensions must be >= 1");
    BinaryImage out(target_w, target_h);
    for (int y = 0; y < target_h; ++y) {
        int sy = std::min<int>(mask.height() - 1,
                               static_cast<int>((y + 0.5) * mask.height() / target_h));
        for (int x = 0; x < target_w; ++x) {
            int sx = std::min<int>(mask.width() - 1,
                                   static_cast<int>((x + 0.5) * mask.width() / target_w));
            out.set(x, y, mask.at(sx, sy));
        }
    }
    return out;
}

} // namespace retseg
