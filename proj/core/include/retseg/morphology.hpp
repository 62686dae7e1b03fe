#pragma once

#include "retseg/image.hpp"

namespace retseg {

struct MorphParams {
    int dilation_radius = 1;        // disk structuring element; 1 covers 3x3
    bool do_bridge = true;
    int min_component_area = 30;    // pixels, at the 500x500 working resolution
    int connectivity = 8;           // 4 or 8

    void validate() const {
        if (dilation_radius < 0)
            throw invalid_argument("morphology: dilation radius must be >= 0");
        if (min_component_area < 0)
            throw invalid_argument("morphology: min component area must be >= 0");
        if (connectivity != 4 && connectivity != 8)
            throw invalid_argument("morphology: connectivity must be 4 or 8");
    }
};

/// Minkowski dilation with a disk of the given radius (squared distance
/// <= (radius + 1/2)^2, so radius 1 covers the full 3x3 neighborhood).
/// Radius 0 is the identity.
BinaryImage dilate(const BinaryImage& mask, int radius);

/// Connect one-pixel gaps: a false pixel turns true when its 3x3 ring holds
/// true pixels from at least two distinct 8-connected components of the ring.
/// True pixels never change, so the output always contains the input.
BinaryImage bridge(const BinaryImage& mask);

/// Remove connected components smaller than min_area (two-pass union-find
/// labeling, 4- or 8-connectivity).
BinaryImage filter_components(const BinaryImage& mask, int min_area, int connectivity);

/// bridge -> dilate -> filter_components -> intersect with the field of view.
BinaryImage postprocess(const BinaryImage& mask, const FovMask& fov, const MorphParams& p);

} // namespace retseg
