#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "retseg/fovmask.hpp"
#include "retseg/imageio.hpp"
#include "retseg/resize.hpp"

using namespace retseg;

namespace {

RgbImage random_rgb(int w, int h, uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    RgbImage img(w, h);
    for (size_t i = 0; i < img.red().size(); ++i) {
        img.red()[i] = uni(rng);
        img.green()[i] = uni(rng);
        img.blue()[i] = uni(rng);
    }
    return img;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("image containers validate dimensions") {
    CHECK_THROWS_AS(RasterImage(0, 5), invalid_argument);
    CHECK_THROWS_AS(RgbImage(RasterImage(2, 2), RasterImage(2, 3), RasterImage(2, 2)),
                    invalid_argument);
    RasterImage r(3, 2, 0.25);
    CHECK(r.size() == 6);
    CHECK(r.at_clamped(-5, 10) == 0.25);
}

TEST_CASE("resize to identical dims is bit-exact") {
    RgbImage img = random_rgb(17, 13, 7);
    RgbImage out = resize_image(img, 17, 13);
    CHECK(out.red().data() == img.red().data());
    CHECK(out.green().data() == img.green().data());
    CHECK(out.blue().data() == img.blue().data());
}

TEST_CASE("resize keeps a constant image constant") {
    RgbImage img(2, 2);
    for (size_t i = 0; i < 4; ++i)
        img.red()[i] = img.green()[i] = img.blue()[i] = 0.5;
    for (auto [w, h] : {std::pair{9, 5}, {500, 500}, {1, 1}, {3, 17}}) {
        RgbImage out = resize_image(img, w, h);
        for (double v : out.green().data()) CHECK(v == 0.5);
    }
}

TEST_CASE("resize handles DRIVE-shaped input and rejects zero targets") {
    RgbImage img = random_rgb(565, 584, 11);
    RgbImage out = resize_image(img, 500, 500);
    CHECK(out.width() == 500);
    CHECK(out.height() == 500);
    for (double v : out.red().data()) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    CHECK_THROWS_AS(resize_image(img, 0, 10), invalid_argument);
    CHECK_THROWS_AS(resize_image(img, 10, 0), invalid_argument);
}

TEST_CASE("nearest resize of masks keeps booleans") {
    BinaryImage m(4, 4);
    m.set(1, 1, true);
    m.set(2, 2, true);
    BinaryImage up = resize_nearest(m, 8, 8);
    CHECK(up.count_true() == 8);  // each source pixel covers 2x2
    BinaryImage back = resize_nearest(up, 4, 4);
    for (size_t i = 0; i < m.size(); ++i) CHECK(back.get(i) == m.get(i));
}

TEST_CASE("png round-trip preserves 8-bit rgb data") {
    RgbImage img = random_rgb(33, 21, 3);
    const std::string path = temp_path("retseg_io_test.png");
    save_png(img, path);
    RgbImage back = load_image(path);
    REQUIRE(back.width() == img.width());
    REQUIRE(back.height() == img.height());
    for (size_t i = 0; i < img.red().size(); ++i) {
        // save quantizes to 8 bits; loading must reproduce those exact levels
        CHECK(back.red()[i] == doctest::Approx(img.red()[i]).epsilon(0.004));
        CHECK(back.blue()[i] == doctest::Approx(img.blue()[i]).epsilon(0.004));
    }
    std::filesystem::remove(path);
}

TEST_CASE("ppm and bmp decode") {
    const std::string ppm = temp_path("retseg_io_test.ppm");
    {
        std::ofstream f(ppm, std::ios::binary);
        f << "P6\n# comment\n2 2\n255\n";
        const unsigned char px[12] = {255, 0, 0, 0, 255, 0, 0, 0, 255, 128, 128, 128};
        f.write(reinterpret_cast<const char*>(px), 12);
    }
    RgbImage img = load_image(ppm);
    CHECK(img.red().at(0, 0) == 1.0);
    CHECK(img.green().at(1, 0) == 1.0);
    CHECK(img.blue().at(0, 1) == 1.0);
    CHECK(img.red().at(1, 1) == doctest::Approx(128.0 / 255.0));
    std::filesystem::remove(ppm);

    const std::string bmp = temp_path("retseg_io_test.bmp");
    {
        // 1x1 24-bit BMP, blue pixel.
        std::ofstream f(bmp, std::ios::binary);
        const unsigned char hdr[54] = {
            'B', 'M', 58, 0, 0, 0, 0, 0, 0, 0, 54, 0, 0, 0, 40, 0, 0, 0,
            1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 24, 0, 0, 0, 0, 0, 4, 0, 0, 0,
            0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
        const unsigned char px[4] = {255, 0, 0, 0};  // BGR + row pad
        f.write(reinterpret_cast<const char*>(hdr), 54);
        f.write(reinterpret_cast<const char*>(px), 4);
    }
    RgbImage b = load_image(bmp);
    CHECK(b.blue().at(0, 0) == 1.0);
    CHECK(b.red().at(0, 0) == 0.0);
    std::filesystem::remove(bmp);
}

TEST_CASE("io errors name the path") {
    const std::string missing = temp_path("retseg_does_not_exist.png");
    try {
        load_image(missing);
        FAIL("expected io_error");
    } catch (const io_error& e) {
        CHECK(std::string(e.what()).find(missing) != std::string::npos);
    }

    const std::string truncated = temp_path("retseg_truncated.png");
    {
        std::ofstream f(truncated, std::ios::binary);
        f << "\x89PNG\r\n\x1a\n garbage";
    }
    try {
        load_image(truncated);
        FAIL("expected io_error");
    } catch (const io_error& e) {
        CHECK(std::string(e.what()).find(truncated) != std::string::npos);
    }
    std::filesystem::remove(truncated);
}

TEST_CASE("estimate_fov_mask finds a bright disk and fills holes") {
    const int n = 64;
    RgbImage img(n, n);
    const double cx = 32, cy = 32, R = 25;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const bool inside = std::hypot(x - cx, y - cy) <= R;
            img.red().at(x, y) = inside ? 0.8 : 0.0;
        }
    }
    // A dark hole inside the disk must be filled.
    img.red().at(32, 32) = 0.0;
    FovMask m = estimate_fov_mask(img, 0.1);
    CHECK(m.at(32, 32));

    size_t mismatches = 0;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            const bool inside = std::hypot(x - cx, y - cy) <= R;
            if (m.at(x, y) != inside) ++mismatches;
        }
    // boundary quantization only
    CHECK(mismatches <= static_cast<size_t>(2 * 3.15 * 2 * R));

    RgbImage black(8, 8);
    CHECK_THROWS_AS(estimate_fov_mask(black, 0.1), degenerate_error);
    CHECK_THROWS_AS(estimate_fov_mask(img, 0.0), invalid_argument);
}

TEST_CASE("load_fov_mask maps nonzero to true and rejects empty masks") {
    const std::string path = temp_path("retseg_fov.png");
    RasterImage gray(6, 4, 0.0);
    gray.at(2, 1) = 1.0;
    gray.at(3, 2) = 0.6;
    save_png(gray, path);
    FovMask m = load_fov_mask(path);
    CHECK(m.count_true() == 2);
    CHECK(m.at(2, 1));
    CHECK(m.at(3, 2));

    save_png(RasterImage(6, 4, 0.0), path);
    CHECK_THROWS_AS(load_fov_mask(path), degenerate_error);
    std::filesystem::remove(path);
}

TEST_CASE("apply_fov zeroes outside pixels") {
    RasterImage img(4, 4, 0.7);
    FovMask m(4, 4, false);
    m.set(1, 1, true);
    RasterImage out = apply_fov(img, m);
    CHECK(out.at(1, 1) == 0.7);
    CHECK(out.at(0, 0) == 0.0);
    CHECK(out.at(3, 3) == 0.0);
}
