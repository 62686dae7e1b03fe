#include "retseg/color.hpp"

#include <cmath>

namespace retseg {

namespace {

// D65 reference white.
constexpr double kXn = 0.95047;
constexpr double kYn = 1.0;
constexpr double kZn = 1.08883;

// CIE thresholds: delta = 6/29.
constexpr double kDelta = 6.0 / 29.0;
constexpr double kDelta3 = kDelta * kDelta * kDelta;          // (6/29)^3
constexpr double kFSlope = 1.0 / (3.0 * kDelta * kDelta);     // 1 / (3 (6/29)^2)

double srgb_to_linear(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double c) {
    if (c <= 0.0) return 0.0;
    return c <= 0.0031308 ? c * 12.92 : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

double lab_f(double t) {
    return t > kDelta3 ? std::cbrt(t) : kFSlope * t + 4.0 / 29.0;
}

double lab_f_inv(double t) {
    return t > kDelta ? t * t * t : (t - 4.0 / 29.0) / kFSlope;
}

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

} // namespace

LabImage rgb_to_lab(const RgbImage& img) {
    LabImage out(img.width(), img.height());
    const size_t n = img.red().size();
    for (size_t i = 0; i < n; ++i) {
        const double r = srgb_to_linear(img.red()[i]);
        const double g = srgb_to_linear(img.green()[i]);
        const double b = srgb_to_linear(img.blue()[i]);

        const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
        const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
        const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;

        const double fx = lab_f(x / kXn);
        const double fy = lab_f(y / kYn);
        const double fz = lab_f(z / kZn);

        out.L()[i] = 116.0 * fy - 16.0;
        out.a()[i] = 500.0 * (fx - fy);
        out.b()[i] = 200.0 * (fy - fz);
    }
    return out;
}

RgbImage lab_to_rgb(const LabImage& img) {
    RgbImage out(img.width(), img.height());
    const size_t n = img.L().size();
    for (size_t i = 0; i < n; ++i) {
        const double fy = (img.L()[i] + 16.0) / 116.0;
        const double fx = fy + img.a()[i] / 500.0;
        const double fz = fy - img.b()[i] / 200.0;

        const double x = kXn * lab_f_inv(fx);
        const double y = kYn * lab_f_inv(fy);
        const double z = kZn * lab_f_inv(fz);

        const double r = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
        const double g = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
        const double b = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;

        out.red()[i] = clamp01(linear_to_srgb(r));
        out.green()[i] = clamp01(linear_to_srgb(g));
        out.blue()[i] = clamp01(linear_to_srgb(b));
    }
    return out;
}

RasterImage weighted_grayscale(const RgbImage& img) {
    RasterImage out(img.width(), img.height());
    const size_t n = out.size();
    for (size_t i = 0; i < n; ++i)
        out[i] = 0.299 * img.red()[i] + 0.587 * img.green()[i] + 0.114 * img.blue()[i];
    return out;
}

} // namespace retseg
