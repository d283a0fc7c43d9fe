// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/image.hpp"

namespace umbra {

GrayImage resize_gray(const GrayImage& src, int width, int height) {
    if (src.width == width && src.height == height) return src;
    GrayImage out(width, height);
    if (src.width % width == 0 && src.height % height == 0) {
        // Integer downsample: box filter.
        int fx = src.width / width;
        int fy = src.height / height;
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                double acc = 0.0;
                for (int j = 0; j < fy; ++j)
                    for (int i = 0; i < fx; ++i) acc += src.at(x * fx + i, y * fy + j);
                out.at(x, y) = acc / (fx * fy);
            }
        }
        return out;
    }
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            int sx = std::min(src.width - 1, int((x + 0.5) * src.width / width));
            int sy = std::min(src.height - 1, int((y + 0.5) * src.height / height));
            out.at(x, y) = src.at(sx, sy);
        }
    }
    return out;
}

}  // namespace umbra
