// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "umbra/bvh.hpp"
#include "umbra/image.hpp"
#include "umbra/mesh.hpp"
#include "umbra/scene.hpp"

namespace umbra::render {

inline constexpr int kDefaultGrid = 16;
inline constexpr double kShadowEpsilon = 1e-4;

/// A mesh standing on the infinite ground plane z = 0, or the bare ground.
class Scene {
public:
    Scene() = default;
    explicit Scene(mesh::TriangleMesh mesh);

    bool has_mesh() const { return bvh_ != nullptr; }
    const mesh::TriangleMesh& mesh() const { return *mesh_; }
    const Bvh& bvh() const { return *bvh_; }

    enum class Surface { kNone, kObject, kGround };
    struct PrimaryHit {
        Surface surface = Surface::kNone;
        double t = 0.0;
        Vec3 point;
        std::uint32_t triangle = 0;
    };
    PrimaryHit trace(const scene::Ray& ray) const;

private:
    std::unique_ptr<mesh::TriangleMesh> mesh_;
    std::unique_ptr<Bvh> bvh_;
};

/// 1 where the primary ray's nearest hit is the object.
MaskImage render_mask(const Scene& scene, const scene::Camera& camera, int workers = 0);

/// Fraction of the grid x grid light samples blocked from each ground-visible pixel.
/// Each pixel draws from its own stream keyed by (seed, pixel index), so the result
/// does not depend on `workers`.
GrayImage render_shadow_map(const Scene& scene, const scene::Camera& camera, const scene::LightParams& light,
                            int grid = kDefaultGrid, std::uint64_t seed = 0, int workers = 0);

/// Flat Lambertian object over white ground, with `shadow` multiplied into the ground.
RgbImage render_preview(const Scene& scene, const scene::Camera& camera, const scene::LightParams& light,
                        const GrayImage& shadow, int workers = 0);

/// Preview with a freshly rendered shadow map.
RgbImage render_preview(const Scene& scene, const scene::Camera& camera, const scene::LightParams& light,
                        int grid = kDefaultGrid, std::uint64_t seed = 0, int workers = 0);

struct RenderTriplet {
    RgbImage preview;
    MaskImage mask;
    GrayImage shadow;
    scene::LightParams params;
    std::string mesh_name;
    std::uint64_t seed = 0;
    int grid = kDefaultGrid;
};

RenderTriplet render_triplet(const Scene& scene, const scene::Camera& camera, const scene::LightParams& light,
                             int grid = kDefaultGrid, std::uint64_t seed = 0, int workers = 0);

/// The object alone on black: luminance of the preview inside the mask.
GrayImage object_gray(const RenderTriplet& triplet);

}  // namespace umbra::render
