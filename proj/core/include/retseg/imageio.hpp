#pragma once

#include <string>

#include "retseg/image.hpp"

namespace retseg {

// Decoders for PNG, BMP (24/32-bit uncompressed) and PPM/PGM (binary).
// 8-bit samples map to value/255, 16-bit to value/65535. All throw io_error
// naming the offending path.

RgbImage load_image(const std::string& path);
RasterImage load_gray(const std::string& path);

void save_png(const RasterImage& img, const std::string& path);
void save_png(const RgbImage& img, const std::string& path);
void save_png(const BinaryImage& mask, const std::string& path);

/// Debug-dump helper: shift/scale to [0,1] before writing (constant images
/// map to mid-gray).
void save_png_normalized(const RasterImage& img, const std::string& path);

} // namespace retseg
