// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/lab/data.hpp"

#include "umbra/error.hpp"
#include "umbra/image_io.hpp"

namespace umbra::lab {
namespace {

GrayImage to_gray(const MaskImage& mask) {
    GrayImage out(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.size(); ++i) out.pixels[i] = mask.pixels[i] ? 1.0 : 0.0;
    return out;
}

GrayImage masked_luminance(const RgbImage& preview, const MaskImage& mask) {
    GrayImage out = luminance(preview);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!mask.pixels[i]) out.pixels[i] = 0.0;
    }
    return out;
}

std::array<double, 2> scaled_anchor(const scene::Camera& camera, int resolution) {
    auto p = camera.project({0.0, 0.0, 0.0});
    const double k = double(resolution) / camera.width;
    return {p[0] * k, p[1] * k};
}

Sample assemble(const RgbImage& preview, const MaskImage& mask, const GrayImage& shadow, int resolution) {
    Sample s;
    s.shadow = resize_gray(shadow, resolution, resolution);
    s.mask = resize_gray(to_gray(mask), resolution, resolution);
    s.object = resize_gray(masked_luminance(preview, mask), resolution, resolution);
    return s;
}

}  // namespace

Sample make_sample(const render::RenderTriplet& triplet, const scene::Camera& camera, int resolution,
                   std::string id) {
    Sample s = assemble(triplet.preview, triplet.mask, triplet.shadow, resolution);
    s.id = std::move(id);
    s.mesh = triplet.mesh_name;
    s.params = triplet.params;
    s.anchor = scaled_anchor(camera, resolution);
    return s;
}

SampleSet load_split(const std::filesystem::path& root, forge::Split split, int resolution, std::size_t limit) {
    const auto manifest_path = root / (forge::to_string(split) + ".jsonl");
    if (!std::filesystem::exists(manifest_path)) throw IoError("missing dataset manifest " + manifest_path.string());
    auto manifest = forge::DatasetManifest::read(manifest_path, root);
    SampleSet set;
    set.resolution = resolution;
    std::size_t n = manifest.entries.size();
    if (limit > 0) n = std::min(n, limit);
    set.items.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = manifest.entries[i];
        Sample s = assemble(io::read_rgb_png(root / e.preview), io::read_mask_png(root / e.mask),
                            io::read_shadow_png(root / e.shadow), resolution);
        s.id = e.id;
        s.mesh = e.mesh;
        s.params = e.params;
        s.anchor = scaled_anchor(scene::dolly_camera(e.camera_distance, e.resolution, e.resolution), resolution);
        set.items.push_back(std::move(s));
    }
    return set;
}

GrayImage blob_for(const scene::LightParams& params, int resolution) {
    return scene::blob_map(params, resolution, resolution);
}

}  // namespace umbra::lab
