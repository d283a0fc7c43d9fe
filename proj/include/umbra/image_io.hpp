// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "umbra/image.hpp"

namespace umbra::io {

// Mask: 8-bit gray, 0/255.
void write_mask_png(const std::filesystem::path& path, const MaskImage& mask);
MaskImage read_mask_png(const std::filesystem::path& path);

// Shadow: 16-bit gray, value = round(65535 * occlusion).
void write_shadow_png(const std::filesystem::path& path, const GrayImage& shadow);
GrayImage read_shadow_png(const std::filesystem::path& path);

// 8-bit gray of a [0,1] image, value = round(255 * v).
void write_gray8_png(const std::filesystem::path& path, const GrayImage& gray);

// 8-bit RGB; reading also accepts gray and RGBA inputs.
void write_rgb_png(const std::filesystem::path& path, const RgbImage& rgb);
RgbImage read_rgb_png(const std::filesystem::path& path);

// Any 8/16-bit PNG as a [0,1] gray image (luminance for colour inputs).
GrayImage read_gray_png(const std::filesystem::path& path);

}  // namespace umbra::io
