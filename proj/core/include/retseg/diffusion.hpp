#pragma once

#include "retseg/image.hpp"

namespace retseg {

enum class ConductionKind { exponential, rational };

struct DiffusionParams {
    int iterations = 10;
    /// Edge-stopping scale in intensity units; gradients well above it stop
    /// conduction.
    double kappa_conduction = 15.0 / 255.0;
    /// Explicit step size; values above 0.25 break the 4-neighbor scheme.
    double lambda_step = 0.25;
    ConductionKind conduction_kind = ConductionKind::exponential;

    void validate() const {
        if (iterations < 0)
            throw invalid_argument("diffusion: iterations must be >= 0");
        if (!(lambda_step > 0.0 && lambda_step <= 0.25))
            throw invalid_argument("diffusion: lambda_step must lie in (0, 0.25]");
        if (!(kappa_conduction > 0.0))
            throw invalid_argument("diffusion: kappa_conduction must be > 0");
    }
};

/// Edge-preserving smoothing: explicit 4-neighbor scheme with replicated
/// boundaries and conduction g(d) = exp(-(d/k)^2) or 1/(1+(d/k)^2).
/// Satisfies the max principle: output values stay inside [min(in), max(in)].
RasterImage anisotropic_diffusion(const RasterImage& img, const DiffusionParams& p);

} // namespace retseg
