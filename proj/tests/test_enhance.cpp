#include <doctest.h>

#include <cmath>
#include <random>

#include "retseg/color.hpp"
#include "retseg/enhance.hpp"

using namespace retseg;

namespace {

RasterImage random_raster(int w, int h, uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    RasterImage img(w, h);
    for (double& v : img.data()) v = uni(rng);
    return img;
}

// Plain global histogram equalization: 256 bins, scaled-CDF mapping.
RasterImage global_he_oracle(const RasterImage& img) {
    std::vector<double> hist(256, 0.0);
    for (double v : img.data()) {
        int b = std::clamp(static_cast<int>(v * 256.0), 0, 255);
        hist[b] += 1.0;
    }
    std::vector<double> cdf(256, 0.0);
    double cum = 0.0;
    for (int b = 0; b < 256; ++b) {
        cum += hist[b];
        cdf[b] = cum / static_cast<double>(img.size());
    }
    RasterImage out(img.width(), img.height());
    for (size_t i = 0; i < img.size(); ++i) {
        int b = std::clamp(static_cast<int>(img[i] * 256.0), 0, 255);
        out[i] = cdf[b];
    }
    return out;
}

} // namespace

TEST_CASE("clahe leaves constant images in place") {
    ClaheParams p;  // 8x8 tiles, clip 0.01
    RasterImage img(64, 64, 0.3);
    RasterImage out = clahe(img, p);
    for (double v : out.data()) CHECK(std::abs(v - 0.3) < 1.0 / 256.0);

    // Idempotence on the constant fixed point.
    RasterImage again = clahe(out, p);
    for (size_t i = 0; i < out.size(); ++i) CHECK(again[i] == out[i]);
}

TEST_CASE("clahe single-tile mapping pushes two levels to the cdf values") {
    ClaheParams p;
    p.tiles_x = p.tiles_y = 1;
    p.clip_limit = 1.0;
    RasterImage img(16, 16);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) img.at(x, y) = y < 8 ? 0.2 : 0.8;
    RasterImage out = clahe(img, p);
    CHECK(out.at(0, 0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(out.at(0, 15) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("clahe with one tile and clip 1 equals global equalization") {
    ClaheParams p;
    p.tiles_x = p.tiles_y = 1;
    p.clip_limit = 1.0;
    RasterImage img = random_raster(32, 24, 21);
    RasterImage ours = clahe(img, p);
    RasterImage oracle = global_he_oracle(img);
    for (size_t i = 0; i < img.size(); ++i)
        CHECK(ours[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
}

TEST_CASE("clahe validates the tile grid") {
    ClaheParams p;
    p.tiles_x = 20;
    p.tiles_y = 20;
    CHECK_THROWS_AS(clahe(RasterImage(8, 8), p), invalid_argument);
    p = ClaheParams{};
    p.clip_limit = 0.0;
    CHECK_THROWS_AS(clahe(RasterImage(64, 64), p), invalid_argument);
}

TEST_CASE("diffusion identity cases") {
    DiffusionParams p;
    p.iterations = 0;
    RasterImage img = random_raster(16, 16, 5);
    RasterImage out = anisotropic_diffusion(img, p);
    for (size_t i = 0; i < img.size(); ++i) CHECK(out[i] == img[i]);

    p.iterations = 25;
    RasterImage flat(16, 16, 0.42);
    out = anisotropic_diffusion(flat, p);
    for (double v : out.data()) CHECK(v == 0.42);
}

TEST_CASE("diffusion matches a 1-D explicit-scheme oracle on a step profile") {
    const int w = 64, h = 8;
    RasterImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) img.at(x, y) = x < w / 2 ? 0.0 : 1.0;

    for (ConductionKind kind : {ConductionKind::exponential, ConductionKind::rational}) {
        DiffusionParams p;
        p.iterations = 100;
        p.kappa_conduction = 100.0;  // heat-equation limit
        p.lambda_step = 0.25;
        p.conduction_kind = kind;

        // Scalar oracle on one row (vertical gradients vanish on this input).
        std::vector<double> row(w), next(w);
        for (int x = 0; x < w; ++x) row[x] = img.at(x, 0);
        auto g = [&](double d) {
            const double r = d / p.kappa_conduction;
            return kind == ConductionKind::exponential ? std::exp(-r * r) : 1.0 / (1.0 + r * r);
        };
        for (int it = 0; it < p.iterations; ++it) {
            for (int x = 0; x < w; ++x) {
                const double c = row[x];
                const double dw = row[x > 0 ? x - 1 : 0] - c;
                const double de = row[x < w - 1 ? x + 1 : w - 1] - c;
                next[x] = c + p.lambda_step * (g(dw) * dw + g(de) * de);
            }
            row.swap(next);
        }

        RasterImage out = anisotropic_diffusion(img, p);
        for (int x = 0; x < w; ++x)
            CHECK(out.at(x, 3) == doctest::Approx(row[x]).epsilon(1e-12));

        // Large kappa smears the step toward the mean.
        const double mid_contrast = out.at(w / 2, 2) - out.at(w / 2 - 1, 2);
        CHECK(mid_contrast < 0.5);
    }

    // Small kappa preserves the edge: contrast loss below 5%.
    DiffusionParams p;
    p.iterations = 100;
    p.kappa_conduction = 0.02;
    RasterImage out = anisotropic_diffusion(img, p);
    CHECK(out.at(w / 2, 4) - out.at(w / 2 - 1, 4) > 0.95);
}

TEST_CASE("diffusion max principle and stability") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        RasterImage img = random_raster(24, 24, 1000 + trial);
        DiffusionParams p;
        p.iterations = 1 + static_cast<int>(uni(rng) * 30);
        p.kappa_conduction = 0.01 + uni(rng);
        p.lambda_step = 0.05 + 0.20 * uni(rng);
        p.conduction_kind = trial % 2 ? ConductionKind::rational : ConductionKind::exponential;
        double lo = 1e9, hi = -1e9;
        for (double v : img.data()) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        RasterImage out = anisotropic_diffusion(img, p);
        for (double v : out.data()) {
            CHECK(v >= lo);
            CHECK(v <= hi);
        }
    }

    // 1000 iterations on noise stays finite.
    DiffusionParams p;
    p.iterations = 1000;
    p.lambda_step = 0.25;
    p.kappa_conduction = 15.0 / 255.0;
    RasterImage out = anisotropic_diffusion(random_raster(32, 32, 77), p);
    for (double v : out.data()) CHECK(std::isfinite(v));
}

TEST_CASE("diffusion validates parameters") {
    DiffusionParams p;
    p.lambda_step = 0.3;
    CHECK_THROWS_AS(anisotropic_diffusion(RasterImage(8, 8), p), invalid_argument);
    p = DiffusionParams{};
    p.iterations = -1;
    CHECK_THROWS_AS(anisotropic_diffusion(RasterImage(8, 8), p), invalid_argument);
}

TEST_CASE("enhance_contrast touches only the L plane") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    RgbImage img(32, 32);
    for (size_t i = 0; i < img.red().size(); ++i) {
        img.red()[i] = uni(rng);
        img.green()[i] = uni(rng);
        img.blue()[i] = uni(rng);
    }
    LabImage lab = rgb_to_lab(img);
    const std::vector<double> a_before = lab.a().data();
    const std::vector<double> b_before = lab.b().data();
    LabImage out = enhance_contrast_lab(std::move(lab), ClaheParams{}, DiffusionParams{});
    CHECK(out.a().data() == a_before);  // bit-identical
    CHECK(out.b().data() == b_before);
}

TEST_CASE("enhance_contrast leaves constant colors essentially unchanged") {
    RgbImage img(32, 32);
    for (size_t i = 0; i < img.red().size(); ++i) {
        img.red()[i] = 0.6;
        img.green()[i] = 0.4;
        img.blue()[i] = 0.25;
    }
    RgbImage out = enhance_contrast(img, ClaheParams{}, DiffusionParams{});
    for (size_t i = 0; i < img.red().size(); ++i) {
        CHECK(std::abs(out.red()[i] - 0.6) < 1e-3);
        CHECK(std::abs(out.green()[i] - 0.4) < 1e-3);
        CHECK(std::abs(out.blue()[i] - 0.25) < 1e-3);
    }
}
