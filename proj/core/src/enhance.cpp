#include "retseg/enhance.hpp"

#include <algorithm>

#include "retseg/color.hpp"

namespace retseg {

LabImage enhance_contrast_lab(LabImage img, const ClaheParams& cp, const DiffusionParams& dp) {
    RasterImage L(img.width(), img.height());
    for (size_t i = 0; i < L.size(); ++i)
        L[i] = std::clamp(img.L()[i] / 100.0, 0.0, 1.0);
    L = anisotropic_diffusion(clahe(L, cp), dp);
    for (size_t i = 0; i < L.size(); ++i)
        img.L()[i] = L[i] * 100.0;
    return img;
}

RgbImage enhance_contrast(const RgbImage& img, const ClaheParams& cp, const DiffusionParams& dp) {
    return lab_to_rgb(enhance_contrast_lab(rgb_to_lab(img), cp, dp));
}

} // namespace retseg
