#pragma once

#include <string>

#include "retseg/image.hpp"

namespace retseg {

/// Load a field-of-view mask from an image file: nonzero pixels become true.
/// Throws io_error on unreadable files, degenerate_error if the mask is empty.
FovMask load_fov_mask(const std::string& path);

/// Estimate the field of view from the red channel: threshold, keep the
/// largest 8-connected component, fill interior holes.
/// threshold must lie in (0,1). Throws degenerate_error when nothing clears it.
FovMask estimate_fov_mask(const RgbImage& img, double threshold = 0.1);

/// Zero all pixels outside the mask.
RasterImage apply_fov(const RasterImage& img, const FovMask& mask);

} // namespace retseg
