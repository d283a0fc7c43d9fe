// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

namespace umbra::io {
namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw IoError("cannot open " + path.string());
    return f;
}

void png_warn(png_structp, png_const_charp) {}

std::uint8_t to8(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

// libpng reports errors by longjmp; these helpers hold no objects with destructors.
bool write_rows(png_structp png, png_infop info, std::FILE* file, int width, int height, int bit_depth,
                int color_type, png_bytepp rows) {
    if (setjmp(png_jmpbuf(png))) return false;
    png_init_io(png, file);
    png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows);
    png_write_end(png, nullptr);
    return true;
}

bool read_header(png_structp png, png_infop info, std::FILE* file) {
    if (setjmp(png_jmpbuf(png))) return false;
    png_init_io(png, file);
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);
    int color = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);
    return true;
}

bool read_rows(png_structp png, png_bytepp rows) {
    if (setjmp(png_jmpbuf(png))) return false;
    png_read_image(png, rows);
    png_read_end(png, nullptr);
    return true;
}

/// Writes `rows` (already packed, big-endian for 16-bit) as a PNG.
void write_png(const std::filesystem::path& path, int width, int height, int bit_depth, int color_type,
               std::vector<std::vector<png_byte>>& rows) {
    FilePtr file = open_file(path, "wb");
    std::vector<png_bytep> ptrs;
    for (auto& row : rows) ptrs.push_back(row.data());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warn);
    png_infop info = png_create_info_struct(png);
    bool ok = write_rows(png, info, file.get(), width, height, bit_depth, color_type, ptrs.data());
    png_destroy_write_struct(&png, &info);
    if (!ok) throw IoError("failed to write PNG " + path.string());
}

struct Decoded {
    int width = 0;
    int height = 0;
    int channels = 0;   // 1 (gray) or 3 (rgb)
    int bit_depth = 8;  // 8 or 16
    std::vector<std::vector<png_byte>> rows;

    double sample(int x, int y, int c) const {
        const auto& row = rows[y];
        std::size_t idx = std::size_t(x) * channels + c;
        if (bit_depth == 16) return double((row[2 * idx] << 8) | row[2 * idx + 1]) / 65535.0;
        return double(row[idx]) / 255.0;
    }
};

Decoded read_png(const std::filesystem::path& path) {
    FilePtr file = open_file(path, "rb");
    png_byte sig[8];
    if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        throw IoError("not a PNG file: " + path.string());
    }
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warn);
    png_infop info = png_create_info_struct(png);
    Decoded out;
    bool ok = read_header(png, info, file.get());
    if (ok) {
        out.width = int(png_get_image_width(png, info));
        out.height = int(png_get_image_height(png, info));
        out.bit_depth = png_get_bit_depth(png, info);
        out.channels = png_get_channels(png, info);
        out.rows.assign(out.height, std::vector<png_byte>(png_get_rowbytes(png, info)));
        std::vector<png_bytep> ptrs;
        for (auto& row : out.rows) ptrs.push_back(row.data());
        ok = read_rows(png, ptrs.data());
    }
    png_destroy_read_struct(&png, &info, nullptr);
    if (!ok) throw IoError("failed to decode PNG " + path.string());
    if (out.channels != 1 && out.channels != 3) throw IoError("unsupported PNG layout: " + path.string());
    return out;
}

}  // namespace

void write_mask_png(const std::filesystem::path& path, const MaskImage& mask) {
    std::vector<std::vector<png_byte>> rows(mask.height, std::vector<png_byte>(mask.width));
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) rows[y][x] = mask.at(x, y) ? 255 : 0;
    write_png(path, mask.width, mask.height, 8, PNG_COLOR_TYPE_GRAY, rows);
}

MaskImage read_mask_png(const std::filesystem::path& path) {
    Decoded d = read_png(path);
    MaskImage mask(d.width, d.height);
    for (int y = 0; y < d.height; ++y)
        for (int x = 0; x < d.width; ++x) mask.at(x, y) = d.sample(x, y, 0) >= 0.5 ? 1 : 0;
    return mask;
}

void write_shadow_png(const std::filesystem::path& path, const GrayImage& shadow) {
    std::vector<std::vector<png_byte>> rows(shadow.height, std::vector<png_byte>(2 * std::size_t(shadow.width)));
    for (int y = 0; y < shadow.height; ++y) {
        for (int x = 0; x < shadow.width; ++x) {
            auto v = static_cast<std::uint16_t>(std::lround(std::clamp(shadow.at(x, y), 0.0, 1.0) * 65535.0));
            rows[y][2 * x] = png_byte(v >> 8);
            rows[y][2 * x + 1] = png_byte(v & 0xff);
        }
    }
    write_png(path, shadow.width, shadow.height, 16, PNG_COLOR_TYPE_GRAY, rows);
}

GrayImage read_shadow_png(const std::filesystem::path& path) { return read_gray_png(path); }

void write_gray8_png(const std::filesystem::path& path, const GrayImage& gray) {
    std::vector<std::vector<png_byte>> rows(gray.height, std::vector<png_byte>(gray.width));
    for (int y = 0; y < gray.height; ++y)
        for (int x = 0; x < gray.width; ++x) rows[y][x] = to8(gray.at(x, y));
    write_png(path, gray.width, gray.height, 8, PNG_COLOR_TYPE_GRAY, rows);
}

void write_rgb_png(const std::filesystem::path& path, const RgbImage& rgb) {
    std::vector<std::vector<png_byte>> rows(rgb.height, std::vector<png_byte>(3 * std::size_t(rgb.width)));
    for (int y = 0; y < rgb.height; ++y)
        for (int x = 0; x < rgb.width; ++x)
            for (int c = 0; c < 3; ++c) rows[y][3 * x + c] = to8(rgb.at(x, y)[c]);
    write_png(path, rgb.width, rgb.height, 8, PNG_COLOR_TYPE_RGB, rows);
}

RgbImage read_rgb_png(const std::filesystem::path& path) {
    Decoded d = read_png(path);
    RgbImage rgb(d.width, d.height);
    for (int y = 0; y < d.height; ++y) {
        for (int x = 0; x < d.width; ++x) {
            for (int c = 0; c < 3; ++c) rgb.at(x, y)[c] = d.sample(x, y, d.channels == 3 ? c : 0);
        }
    }
    return rgb;
}

GrayImage read_gray_png(const std::filesystem::path& path) {
    Decoded d = read_png(path);
    GrayImage gray(d.width, d.height);
    for (int y = 0; y < d.height; ++y) {
        for (int x = 0; x < d.width; ++x) {
            gray.at(x, y) = d.channels == 1 ? d.sample(x, y, 0)
                                            : 0.2126 * d.sample(x, y, 0) + 0.7152 * d.sample(x, y, 1) +
                                                  0.0722 * d.sample(x, y, 2);
        }
    }
    return gray;
}

}  // namespace umbra::io
