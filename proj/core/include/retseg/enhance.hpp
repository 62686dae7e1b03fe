#pragma once

#include "retseg/clahe.hpp"
#include "retseg/diffusion.hpp"
#include "retseg/image.hpp"

namespace retseg {

/// Contrast enhancement on the luminosity plane only: CLAHE followed by
/// anisotropic diffusion, both applied to L rescaled into [0,1]. The a/b
/// chroma planes pass through untouched.
LabImage enhance_contrast_lab(LabImage img, const ClaheParams& cp, const DiffusionParams& dp);

/// rgb -> lab -> enhance_contrast_lab -> rgb.
RgbImage enhance_contrast(const RgbImage& img, const ClaheParams& cp, const DiffusionParams& dp);

} // namespace retseg
