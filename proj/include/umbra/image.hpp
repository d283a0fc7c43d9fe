// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "umbra/error.hpp"

namespace umbra {

using Rgb = std::array<double, 3>;

/// Row-major image, row 0 at the top.
template <typename T>
struct Image {
    int width = 0;
    int height = 0;
    std::vector<T> pixels;

    Image() = default;
    Image(int w, int h, T fill = T{}) : width(w), height(h), pixels(std::size_t(w) * h, fill) {}

    T& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }
    const T& at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
    std::size_t size() const { return pixels.size(); }
    bool same_shape(int w, int h) const { return width == w && height == h; }
    template <typename U>
    bool same_shape(const Image<U>& other) const {
        return width == other.width && height == other.height;
    }

    friend bool operator==(const Image&, const Image&) = default;
};

using GrayImage = Image<double>;   // values in [0,1]
using MaskImage = Image<std::uint8_t>;  // 0 or 1
using RgbImage = Image<Rgb>;

template <typename A, typename B>
void require_same_shape(const Image<A>& a, const Image<B>& b, const char* where) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(where) + ": shape mismatch " + std::to_string(a.width) + "x" +
                         std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                         std::to_string(b.height));
    }
}

/// Rec. 709 luminance.
inline GrayImage luminance(const RgbImage& rgb) {
    GrayImage out(rgb.width, rgb.height);
    for (std::size_t i = 0; i < rgb.size(); ++i) {
        const Rgb& c = rgb.pixels[i];
        out.pixels[i] = 0.2126 * c[0] + 0.7152 * c[1] + 0.0722 * c[2];
    }
    return out;
}

/// Nearest-neighbour / box resampling between integer-ratio resolutions.
GrayImage resize_gray(const GrayImage& src, int width, int height);

}  // namespace umbra
