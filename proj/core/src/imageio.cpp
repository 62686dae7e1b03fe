#include "retseg/imageio.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace retseg {

namespace {

uint8_t to_byte(double v) {
    const double c = std::clamp(v, 0.0, 1.0);
    return static_cast<uint8_t>(c * 255.0 + 0.5);
}

enum class FileKind { png, bmp, pnm, unknown };

FileKind sniff(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open file: " + path);
    unsigned char magic[8] = {};
    f.read(reinterpret_cast<char*>(magic), 8);
    if (f.gcount() >= 8 && png_sig_cmp(magic, 0, 8) == 0) return FileKind::png;
    if (f.gcount() >= 2 && magic[0] == 'B' && magic[1] == 'M') return FileKind::bmp;
    if (f.gcount() >= 2 && magic[0] == 'P' && (magic[1] == '5' || magic[1] == '6'))
        return FileKind::pnm;
    return FileKind::unknown;
}

// ---- PNG (libpng simplified API) ----

std::vector<uint8_t> read_png_buffer(const std::string& path, png_uint_32 format,
                                     int channels, int& w, int& h) {
    png_image im;
    std::memset(&im, 0, sizeof(im));
    im.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&im, path.c_str()))
        throw io_error("failed to read PNG '" + path + "': " + im.message);
    im.format = format;
    std::vector<uint8_t> buf(static_cast<size_t>(PNG_IMAGE_SIZE(im)));
    if (!png_image_finish_read(&im, nullptr, buf.data(), 0, nullptr)) {
        png_image_free(&im);
        throw io_error("failed to decode PNG '" + path + "': " + im.message);
    }
    w = static_cast<int>(im.width);
    h = static_cast<int>(im.height);
    if (buf.size() != static_cast<size_t>(w) * h * channels)
        throw io_error("unexpected PNG buffer size: " + path);
    return buf;
}

RgbImage load_png_rgb(const std::string& path) {
    int w = 0, h = 0;
    std::vector<uint8_t> buf = read_png_buffer(path, PNG_FORMAT_RGB, 3, w, h);
    RgbImage img(w, h);
    const size_t n = static_cast<size_t>(w) * h;
    for (size_t i = 0; i < n; ++i) {
        img.red()[i] = buf[3 * i] / 255.0;
        img.green()[i] = buf[3 * i + 1] / 255.0;
        img.blue()[i] = buf[3 * i + 2] / 255.0;
    }
    return img;
}

RasterImage load_png_gray(const std::string& path) {
    int w = 0, h = 0;
    std::vector<uint8_t> buf = read_png_buffer(path, PNG_FORMAT_GRAY, 1, w, h);
    RasterImage img(w, h);
    for (size_t i = 0; i < img.size(); ++i) img[i] = buf[i] / 255.0;
    return img;
}

void write_png(const std::string& path, const uint8_t* data, int w, int h, bool rgb) {
    png_image im;
    std::memset(&im, 0, sizeof(im));
    im.version = PNG_IMAGE_VERSION;
    im.width = static_cast<png_uint_32>(w);
    im.height = static_cast<png_uint_32>(h);
    im.format = rgb ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&im, path.c_str(), 0, data, 0, nullptr))
        throw io_error("failed to write PNG '" + path + "': " + im.message);
}

// ---- BMP (24/32-bit uncompressed) ----

uint32_t rd_u32(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}
int32_t rd_i32(const uint8_t* p) { return static_cast<int32_t>(rd_u32(p)); }
uint16_t rd_u16(const uint8_t* p) {
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

RgbImage load_bmp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open file: " + path);
    std::vector<uint8_t> raw((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (raw.size() < 54 || raw[0] != 'B' || raw[1] != 'M')
        throw io_error("not a BMP file: " + path);
    const uint32_t data_off = rd_u32(&raw[10]);
    const int32_t w = rd_i32(&raw[18]);
    const int32_t h_signed = rd_i32(&raw[22]);
    const uint16_t bpp = rd_u16(&raw[28]);
    const uint32_t compression = rd_u32(&raw[30]);
    if (w <= 0 || h_signed == 0) throw io_error("bad BMP dimensions: " + path);
    if ((bpp != 24 && bpp != 32) || compression != 0)
        throw io_error("unsupported BMP variant (need 24/32-bit uncompressed): " + path);
    const bool top_down = h_signed < 0;
    const int h = top_down ? -h_signed : h_signed;
    const size_t bytespp = bpp / 8;
    const size_t stride = (static_cast<size_t>(w) * bytespp + 3) & ~size_t{3};
    if (raw.size() < data_off + stride * h)
        throw io_error("truncated BMP file: " + path);

    RgbImage img(w, h);
    for (int y = 0; y < h; ++y) {
        const int src_row = top_down ? y : (h - 1 - y);
        const uint8_t* row = raw.data() + data_off + stride * src_row;
        for (int x = 0; x < w; ++x) {
            const uint8_t* px = row + bytespp * x;
            img.blue().at(x, y) = px[0] / 255.0;
            img.green().at(x, y) = px[1] / 255.0;
            img.red().at(x, y) = px[2] / 255.0;
        }
    }
    return img;
}

// ---- PNM (binary P5 gray / P6 rgb) ----

int pnm_token(std::istream& in, const std::string& path) {
    // Whitespace-separated integer, '#' comments run to end of line.
    int c = in.get();
    while (c == '#' || std::isspace(c)) {
        if (c == '#')
            while (c != '\n' && c != EOF) c = in.get();
        c = in.get();
    }
    if (c == EOF) throw io_error("truncated PNM header: " + path);
    int v = 0;
    while (std::isdigit(c)) {
        v = v * 10 + (c - '0');
        c = in.get();
    }
    return v;
}

RgbImage load_pnm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open file: " + path);
    char p = static_cast<char>(f.get());
    char kind = static_cast<char>(f.get());
    if (p != 'P' || (kind != '5' && kind != '6'))
        throw io_error("unsupported PNM variant (need binary P5/P6): " + path);
    const int w = pnm_token(f, path);
    const int h = pnm_token(f, path);
    const int maxval = pnm_token(f, path);
    if (w < 1 || h < 1 || maxval < 1 || maxval > 65535)
        throw io_error("bad PNM header: " + path);
    const int channels = kind == '6' ? 3 : 1;
    const int bytes_per_sample = maxval > 255 ? 2 : 1;
    const size_t count = static_cast<size_t>(w) * h * channels;
    std::vector<uint8_t> buf(count * bytes_per_sample);
    f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<size_t>(f.gcount()) != buf.size())
        throw io_error("truncated PNM data: " + path);

    auto sample = [&](size_t i) -> double {
        if (bytes_per_sample == 1) return buf[i] / static_cast<double>(maxval);
        return ((buf[2 * i] << 8) | buf[2 * i + 1]) / static_cast<double>(maxval);
    };
    RgbImage img(w, h);
    const size_t n = static_cast<size_t>(w) * h;
    for (size_t i = 0; i < n; ++i) {
        if (channels == 3) {
            img.red()[i] = sample(3 * i);
            img.green()[i] = sample(3 * i + 1);
            img.blue()[i] = sample(3 * i + 2);
        } else {
            img.red()[i] = img.green()[i] = img.blue()[i] = sample(i);
        }
    }
    return img;
}

} // namespace

RgbImage load_image(const std::string& path) {
    switch (sniff(path)) {
        case FileKind::png: return load_png_rgb(path);
        case FileKind::bmp: return load_bmp(path);
        case FileKind::pnm: return load_pnm(path);
        default:
            throw io_error("unrecognized image format (PNG, BMP, PPM/PGM supported): " + path);
    }
}

RasterImage load_gray(const std::string& path) {
    if (sniff(path) == FileKind::png) return load_png_gray(path);
    RgbImage rgb = load_image(path);
    RasterImage out(rgb.width(), rgb.height());
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = (rgb.red()[i] + rgb.green()[i] + rgb.blue()[i]) / 3.0;
    return out;
}

void save_png(const RasterImage& img, const std::string& path) {
    std::vector<uint8_t> buf(img.size());
    for (size_t i = 0; i < img.size(); ++i) buf[i] = to_byte(img[i]);
    write_png(path, buf.data(), img.width(), img.height(), false);
}

void save_png(const RgbImage& img, const std::string& path) {
    const size_t n = static_cast<size_t>(img.width()) * img.height();
    std::vector<uint8_t> buf(n * 3);
    for (size_t i = 0; i < n; ++i) {
        buf[3 * i] = to_byte(img.red()[i]);
        buf[3 * i + 1] = to_byte(img.green()[i]);
        buf[3 * i + 2] = to_byte(img.blue()[i]);
    }
    write_png(path, buf.data(), img.width(), img.height(), true);
}

void save_png(const BinaryImage& mask, const std::string& path) {
    std::vector<uint8_t> buf(mask.size());
    for (size_t i = 0; i < mask.size(); ++i) buf[i] = mask.get(i) ? 255 : 0;
    write_png(path, buf.data(), mask.width(), mask.height(), false);
}

void save_png_normalized(const RasterImage& img, const std::string& path) {
    const auto [lo_it, hi_it] = std::minmax_element(img.data().begin(), img.data().end());
    const double lo = *lo_it, hi = *hi_it;
    RasterImage scaled(img.width(), img.height(), 0.5);
    if (hi > lo)
        for (size_t i = 0; i < img.size(); ++i) scaled[i] = (img[i] - lo) / (hi - lo);
    save_png(scaled, path);
}

} // namespace retseg
