#include "retseg/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace retseg {

RasterImage anisotropic_diffusion(const RasterImage& img, const DiffusionParams& p) {
    p.validate();
    const int w = img.width(), h = img.height();
    const double inv_k = 1.0 / p.kappa_conduction;
    const bool expo = p.conduction_kind == ConductionKind::exponential;

    auto g = [&](double d) {
        const double r = d * inv_k;
        return expo ? std::exp(-r * r) : 1.0 / (1.0 + r * r);
    };

    double lo = img[0], hi = img[0];
    for (double v : img.data()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    RasterImage cur = img;
    RasterImage next(w, h);
    for (int it = 0; it < p.iterations; ++it) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double c = cur.at(x, y);
                const double dn = cur.at_clamped(x, y - 1) - c;
                const double ds = cur.at_clamped(x, y + 1) - c;
                const double dw = cur.at_clamped(x - 1, y) - c;
                const double de = cur.at_clamped(x + 1, y) - c;
                const double v = c + p.lambda_step *
                    (g(dn) * dn + g(ds) * ds + g(dw) * dw + g(de) * de);
                // lambda <= 0.25 makes the update a convex combination; the
                // clamp only absorbs last-ulp rounding.
                next.at(x, y) = std::clamp(v, lo, hi);
            }
        }
        std::swap(cur, next);
    }
    return cur;
}

} // namespace retseg
