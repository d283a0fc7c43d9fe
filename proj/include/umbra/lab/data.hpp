// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "umbra/forge.hpp"
#include "umbra/image.hpp"
#include "umbra/render.hpp"
#include "umbra/scene.hpp"

namespace umbra::lab {

/// One training or evaluation example at model resolution. All maps are in [0, 1].
struct Sample {
    std::string id;
    std::string mesh;
    scene::LightParams params;
    GrayImage shadow;
    GrayImage mask;
    /// Luminance of the preview restricted to the object mask, so ground shading
    /// (which reveals the shadow) never reaches the network.
    GrayImage object;
    /// Anchor of the object on the ground in pixel coordinates.
    std::array<double, 2> anchor{0.0, 0.0};
};

struct SampleSet {
    int resolution = 0;
    std::vector<Sample> items;
};

/// Builds a sample from a fresh render, resampling to `resolution`.
Sample make_sample(const render::RenderTriplet& triplet, const scene::Camera& camera, int resolution,
                   std::string id = {});

/// Loads `<root>/<split>.jsonl` and its images. `limit` > 0 keeps the first entries only.
/// Throws IoError when the manifest or a referenced file is missing.
SampleSet load_split(const std::filesystem::path& root, forge::Split split, int resolution, std::size_t limit = 0);

/// Blob light map at the sample's resolution.
GrayImage blob_for(const scene::LightParams& params, int resolution);

}  // namespace umbra::lab
