// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "umbra/error.hpp"
#include "umbra/image_io.hpp"

using namespace umbra;

TEST(ImageIo, MaskRoundTrip) {
    oracle::TempDir dir("png-mask");
    MaskImage m(7, 5);
    for (std::size_t i = 0; i < m.size(); ++i) m.pixels[i] = (i * 7) % 3 == 0;
    io::write_mask_png(dir.path() / "m.png", m);
    EXPECT_EQ(io::read_mask_png(dir.path() / "m.png"), m);
}

TEST(ImageIo, ShadowUsesSixteenBitQuantization) {
    oracle::TempDir dir("png-shadow");
    Rng rng(1);
    GrayImage g = oracle::random_gray(9, 4, rng);
    g.pixels[0] = 0.0;
    g.pixels[1] = 1.0;
    io::write_shadow_png(dir.path() / "s.png", g);
    GrayImage back = io::read_shadow_png(dir.path() / "s.png");
    ASSERT_TRUE(back.same_shape(g));
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_EQ(back.pixels[i], std::round(65535.0 * g.pixels[i]) / 65535.0);
    }
}

TEST(ImageIo, RgbRoundTripAtEightBits) {
    oracle::TempDir dir("png-rgb");
    RgbImage img(3, 2);
    for (std::size_t i = 0; i < img.size(); ++i) img.pixels[i] = {i / 5.0, 1.0 - i / 5.0, 0.5};
    io::write_rgb_png(dir.path() / "c.png", img);
    RgbImage back = io::read_rgb_png(dir.path() / "c.png");
    for (std::size_t i = 0; i < img.size(); ++i) {
        for (int c = 0; c < 3; ++c) EXPECT_NEAR(back.pixels[i][c], img.pixels[i][c], 0.5 / 255.0 + 1e-12);
    }
}

TEST(ImageIo, MissingFileIsAnIoError) {
    EXPECT_THROW(io::read_rgb_png("/nonexistent/umbra.png"), IoError);
    EXPECT_THROW(io::read_gray_png("/nonexistent/umbra.png"), IoError);
}

TEST(ResizeGray, BoxFilterOnIntegerFactors) {
    GrayImage g(4, 2);
    g.pixels = {0, 1, 2, 3, 4, 5, 6, 7};
    GrayImage r = resize_gray(g, 2, 1);
    EXPECT_DOUBLE_EQ(r.pixels[0], (0 + 1 + 4 + 5) / 4.0);
    EXPECT_DOUBLE_EQ(r.pixels[1], (2 + 3 + 6 + 7) / 4.0);
    EXPECT_EQ(resize_gray(g, 4, 2), g);
}
