#pragma once

#include "retseg/image.hpp"

namespace retseg {

/// sRGB -> CIELab (D65 white, sRGB transfer curve). Total on [0,1] input.
LabImage rgb_to_lab(const RgbImage& img);

/// CIELab -> sRGB, out-of-gamut channels clamped to [0,1].
RgbImage lab_to_rgb(const LabImage& img);

/// Luma-weighted grayscale: 0.299 R + 0.587 G + 0.114 B per pixel.
/// Weights sum to 1, so [0,1] input stays in [0,1] with no clamping.
RasterImage weighted_grayscale(const RgbImage& img);

} // namespace retseg
