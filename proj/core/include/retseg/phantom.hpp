#pragma once

#include <cstdint>

#include "retseg/image.hpp"

namespace retseg {

struct PhantomParams {
    int size = 512;
    int num_vessels = 12;
    double noise_sigma = 0.012;

    void validate() const {
        if (size < 64) throw invalid_argument("phantom: size must be >= 64");
        if (num_vessels < 0) throw invalid_argument("phantom: num_vessels must be >= 0");
        if (noise_sigma < 0.0) throw invalid_argument("phantom: noise_sigma must be >= 0");
    }
};

struct Phantom {
    RgbImage image;
    BinaryImage truth;  // exact vessel mask
    FovMask fov;
};

/// Synthetic fundus-like test image: dark red-brown curved vessels (widths
/// about 1-5 px) radiating from a bright disk over a textured orange
/// background inside a circular field of view, plus Gaussian noise. Fully
/// deterministic in the seed (own inline generator, no library RNG).
Phantom make_phantom(uint64_t seed, const PhantomParams& params);
Phantom make_phantom(uint64_t seed, int size);

} // namespace retseg
