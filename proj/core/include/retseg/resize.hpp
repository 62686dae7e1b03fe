#pragma once

#include "retseg/image.hpp"

namespace retseg {

/// Bilinear resize; output clamped to [0,1]. Identical target dims copy the
/// input bit for bit.
RasterImage resize_raster(const RasterImage& img, int target_w, int target_h);
RgbImage resize_image(const RgbImage& img, int target_w, int target_h);

/// Nearest-neighbor resize for label/mask rasters (never invents values).
BinaryImage resize_nearest(const BinaryImage& mask, int target_w, int target_h);

} // namespace retseg
