#pragma once

#include <cstdint>
#include <vector>

#include "retseg/errors.hpp"

namespace retseg {

/// Single-channel raster of real intensities, row-major, nominally in [0,1].
/// Operations that declare clamped output guarantee every value lands in [0,1].
class RasterImage {
public:
    RasterImage() = default;
    RasterImage(int width, int height, double fill = 0.0)
        : width_(width), height_(height),
          data_(static_cast<size_t>(check_dims(width, height)) , fill) {}

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& at(int x, int y) { return data_[static_cast<size_t>(y) * width_ + x]; }
    double at(int x, int y) const { return data_[static_cast<size_t>(y) * width_ + x]; }
    double& operator[](size_t i) { return data_[i]; }
    double operator[](size_t i) const { return data_[i]; }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    /// Clamped sample with replicated (clamp-to-edge) boundary.
    double at_clamped(int x, int y) const {
        x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
        y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
        return at(x, y);
    }

    bool same_dims(const RasterImage& o) const noexcept {
        return width_ == o.width_ && height_ == o.height_;
    }

private:
    static size_t check_dims(int w, int h) {
        if (w < 1 || h < 1) throw invalid_argument("image dimensions must be >= 1");
        return static_cast<size_t>(w) * static_cast<size_t>(h);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Three-plane sRGB image; planes share dimensions, values in [0,1].
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height)
        : r_(width, height), g_(width, height), b_(width, height) {}
    RgbImage(RasterImage r, RasterImage g, RasterImage b)
        : r_(std::move(r)), g_(std::move(g)), b_(std::move(b)) {
        if (!r_.same_dims(g_) || !r_.same_dims(b_))
            throw invalid_argument("rgb planes must share dimensions");
    }

    int width() const noexcept { return r_.width(); }
    int height() const noexcept { return r_.height(); }

    RasterImage& red() noexcept { return r_; }
    RasterImage& green() noexcept { return g_; }
    RasterImage& blue() noexcept { return b_; }
    const RasterImage& red() const noexcept { return r_; }
    const RasterImage& green() const noexcept { return g_; }
    const RasterImage& blue() const noexcept { return b_; }

private:
    RasterImage r_, g_, b_;
};

/// CIELab image: L plane in [0,100], a/b planes unbounded (typically [-128,127]).
class LabImage {
public:
    LabImage() = default;
    LabImage(int width, int height)
        : L_(width, height), a_(width, height), b_(width, height) {}
    LabImage(RasterImage L, RasterImage a, RasterImage b)
        : L_(std::move(L)), a_(std::move(a)), b_(std::move(b)) {
        if (!L_.same_dims(a_) || !L_.same_dims(b_))
            throw invalid_argument("lab planes must share dimensions");
    }

    int width() const noexcept { return L_.width(); }
    int height() const noexcept { return L_.height(); }

    RasterImage& L() noexcept { return L_; }
    RasterImage& a() noexcept { return a_; }
    RasterImage& b() noexcept { return b_; }
    const RasterImage& L() const noexcept { return L_; }
    const RasterImage& a() const noexcept { return a_; }
    const RasterImage& b() const noexcept { return b_; }

private:
    RasterImage L_, a_, b_;
};

/// Binary raster; used for thresholded maps and segmentation masks.
class BinaryImage {
public:
    BinaryImage() = default;
    BinaryImage(int width, int height, bool fill = false)
        : width_(width), height_(height),
          data_(static_cast<size_t>(check_dims(width, height)), fill ? 1 : 0) {}

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    size_t size() const noexcept { return data_.size(); }

    bool at(int x, int y) const { return data_[static_cast<size_t>(y) * width_ + x] != 0; }
    void set(int x, int y, bool v) { data_[static_cast<size_t>(y) * width_ + x] = v ? 1 : 0; }
    bool get(size_t i) const { return data_[i] != 0; }
    void set(size_t i, bool v) { data_[i] = v ? 1 : 0; }

    std::vector<uint8_t>& data() noexcept { return data_; }
    const std::vector<uint8_t>& data() const noexcept { return data_; }

    bool same_dims(const BinaryImage& o) const noexcept {
        return width_ == o.width_ && height_ == o.height_;
    }

    size_t count_true() const noexcept {
        size_t n = 0;
        for (uint8_t v : data_) n += (v != 0);
        return n;
    }

private:
    static size_t check_dims(int w, int h) {
        if (w < 1 || h < 1) throw invalid_argument("image dimensions must be >= 1");
        return static_cast<size_t>(w) * static_cast<size_t>(h);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<uint8_t> data_;
};

/// Field-of-view mask: true marks the usable retinal region. Masks produced by
/// the loaders/estimators always contain at least one true pixel.
class FovMask {
public:
    FovMask() = default;
    FovMask(int width, int height, bool fill = false) : mask_(width, height, fill) {}
    explicit FovMask(BinaryImage m) : mask_(std::move(m)) {}

    int width() const noexcept { return mask_.width(); }
    int height() const noexcept { return mask_.height(); }

    bool at(int x, int y) const { return mask_.at(x, y); }
    void set(int x, int y, bool v) { mask_.set(x, y, v); }
    bool get(size_t i) const { return mask_.get(i); }

    const BinaryImage& as_binary() const noexcept { return mask_; }
    BinaryImage& as_binary() noexcept { return mask_; }
    size_t count_true() const noexcept { return mask_.count_true(); }

    /// All-true mask covering the full frame.
    static FovMask full(int width, int height) { return FovMask(width, height, true); }

private:
    BinaryImage mask_;
};

} // namespace retseg
