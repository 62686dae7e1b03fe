#pragma once

#include "retseg/image.hpp"

namespace retseg {

struct BackgroundParams {
    /// Median window side in pixels. Even sizes are anchored with the window's
    /// top-left at (-w/2, -w/2) from the output pixel.
    int median_window = 20;

    void validate() const {
        if (median_window < 3)
            throw invalid_argument("background: median window must be >= 3");
    }
};

/// Background estimate: per-pixel median over a median_window^2 neighborhood
/// with replicated edges. Intensities are quantized to 8 bits inside the
/// filter (sliding 256-bin histogram); the median of an even count is the
/// lower of the two middle order statistics. Output values are k/255 levels.
RasterImage estimate_background(const RasterImage& weighted, const BackgroundParams& p);

/// True where weighted - bg <= 0 (vessels and flat background; bright
/// structures such as the optic disk come out false).
BinaryImage threshold_mask(const RasterImage& weighted, const RasterImage& bg);

/// Complement-style suppression with a binary threshold map:
/// out = 1 - clamp(edge - (t ? 1 : 0), 0, 1). Pixels inside t map to exactly 1.
RasterImage remove_od(const RasterImage& edge, const BinaryImage& t);

/// Complement-style suppression keeping the signed residual: the threshold
/// map is replaced by the negative part of (weighted - bg), so vessel cores
/// (strong negative residual, strong edge response) land darkest, bright
/// structure boundaries land mid-dark, and background stays near 1. This
/// keeps the three intensity classes separable for the clustering stage.
RasterImage remove_od_residual(const RasterImage& edge, const RasterImage& weighted,
                               const RasterImage& bg);

} // namespace retseg
