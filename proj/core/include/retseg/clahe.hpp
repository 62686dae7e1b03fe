#pragma once

#include "retseg/image.hpp"

namespace retseg {

struct ClaheParams {
    int tiles_x = 8;
    int tiles_y = 8;
    /// Histogram clip threshold as a fraction of the tile pixel count,
    /// in (0,1]. 1.0 disables clipping (plain adaptive equalization).
    double clip_limit = 0.01;

    void validate() const {
        if (tiles_x < 1 || tiles_y < 1)
            throw invalid_argument("clahe: tile counts must be >= 1");
        if (!(clip_limit > 0.0 && clip_limit <= 1.0))
            throw invalid_argument("clahe: clip_limit must lie in (0,1]");
    }
};

/// Contrast-limited adaptive histogram equalization on a [0,1] raster.
///
/// 256-bin tile histograms, clipped at clip_limit * tile_count with the excess
/// redistributed uniformly; per-tile mapping is the scaled CDF; pixel values
/// are blended bilinearly between the four surrounding tile mappings. Tiles of
/// a single intensity level map through the identity. Boundary tiles use
/// reflected padding when the image is not divisible by the tile grid.
RasterImage clahe(const RasterImage& img, const ClaheParams& p);

} // namespace retseg
