#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "retseg/image.hpp"

namespace retseg {

struct CurveletParams {
    /// Number of scales; 0 means ceil(log2(n)) - 3 for an n x n transform.
    int num_scales = 0;
    /// Wedges at the second-coarsest scale; positive multiple of 4.
    int num_angles_coarse = 16;
    /// Detail amplification factor used by edge enhancement.
    double kappa_boost = 5.0;
    /// Multiply the weighted image with |inverse| instead of the signed
    /// inverse during edge enhancement.
    bool abs_inverse = false;

    void validate() const {
        if (num_scales != 0 && num_scales < 2)
            throw invalid_argument("curvelet: num_scales must be >= 2");
        if (num_angles_coarse < 4 || num_angles_coarse % 4 != 0)
            throw invalid_argument("curvelet: num_angles_coarse must be a positive multiple of 4");
        if (!(kappa_boost > 0.0))
            throw invalid_argument("curvelet: kappa_boost must be > 0");
    }
};

/// One complex coefficient grid (scale, wedge).
struct WedgeGrid {
    int rows = 0;
    int cols = 0;
    std::vector<std::complex<double>> data;  // row-major, rows*cols

    std::complex<double>& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    std::complex<double> at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
};

/// Jagged coefficient set: scales[0] is the coarse approximation (one wedge),
/// the last scale is the wavelet-style highpass band (one wedge), and the
/// scales between carry the directional wedges.
struct CurveletCoeffs {
    int image_size = 0;  // transform operates on image_size^2 inputs
    std::vector<std::vector<WedgeGrid>> scales;

    int num_scales() const noexcept { return static_cast<int>(scales.size()); }
    double energy() const;
};

/// Frequency-tiled multiscale transform in the wrapping style: unitary 2-D
/// FFT, smooth frequency windows partitioning concentric square annuli into
/// directional wedges (sum of squared windows is exactly 1 on the grid), each
/// windowed wedge wrapped onto a small rectangle and inverse-transformed.
/// The frame is tight, so the adjoint reconstructs exactly.
///
/// Window tables are immutable after construction; forward/inverse are const
/// and safe to call concurrently from multiple threads.
class CurveletTransform {
public:
    CurveletTransform(int size, const CurveletParams& params);
    ~CurveletTransform();
    CurveletTransform(const CurveletTransform&) = delete;
    CurveletTransform& operator=(const CurveletTransform&) = delete;

    CurveletCoeffs forward(const RasterImage& img) const;

    /// Adjoint of forward (equal to the inverse for this tight frame). The
    /// imaginary part of the result is discarded; pass imag_residual to
    /// observe its largest magnitude (near rounding level for coefficients
    /// that came from a real image).
    RasterImage inverse(const CurveletCoeffs& coeffs, double* imag_residual = nullptr) const;

    int size() const noexcept;
    int num_scales() const noexcept;
    const std::vector<int>& wedge_counts() const noexcept;

    /// max |sum of squared windows - 1| over the frequency grid; the tight
    /// frame property holds exactly when this is at rounding level.
    double partition_max_error() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Convenience wrappers constructing a transform per call. The image must be
/// square with even dimensions.
CurveletCoeffs fdct_forward(const RasterImage& img, const CurveletParams& p);
RasterImage fdct_inverse(const CurveletCoeffs& coeffs, const CurveletParams& p);

/// Zero the coarse approximation and multiply every detail coefficient by
/// kappa. Shapes are unchanged.
CurveletCoeffs boost_details(CurveletCoeffs coeffs, double kappa);

/// Vessel-edge enhancement: mask the weighted image, zero-pad to a power-of-
/// two canvas, forward transform, boost details, invert, crop, multiply with
/// the weighted image and clamp to [0,1]. Output is zero outside the mask.
RasterImage edge_enhance(const RasterImage& weighted, const FovMask& mask,
                         const CurveletParams& p);

/// Same, reusing a prebuilt transform whose size covers the padded canvas.
/// When boosted_out is non-null it receives the boosted coefficient set.
RasterImage edge_enhance(const RasterImage& weighted, const FovMask& mask,
                         const CurveletParams& p, const CurveletTransform& transform,
                         CurveletCoeffs* boosted_out = nullptr);

/// Write one normalized magnitude map per (scale, wedge) under dir, named
/// scale<j>_wedge<w>.png.
void dump_coefficient_maps(const CurveletCoeffs& coeffs, const std::string& dir);

/// Smallest power-of-two canvas (>= 64) able to hold a w x h image.
int curvelet_canvas_size(int w, int h);

} // namespace retseg
