// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/render.hpp"

#include <algorithm>

#include "umbra/error.hpp"
#include "umbra/parallel.hpp"
#include "umbra/rng.hpp"

namespace umbra::render {

using scene::Camera;
using scene::LightParams;
using scene::Ray;

namespace {

constexpr double kAlbedo = 0.75;
constexpr double kAmbient = 0.25;

template <typename Fn>
void for_each_row(const Camera& camera, int workers, Fn&& fn) {
    camera.validate();
    parallel_for(camera.height, resolve_workers(workers), [&](int y) { fn(y); });
}

}  // namespace

Scene::Scene(mesh::TriangleMesh mesh) : mesh_(std::make_unique<mesh::TriangleMesh>(std::move(mesh))) {
    bvh_ = std::make_unique<Bvh>(*mesh_);
}

Scene::PrimaryHit Scene::trace(const Ray& ray) const {
    PrimaryHit hit;
    double t_ground = std::numeric_limits<double>::infinity();
    if (ray.dir.z < 0.0 && ray.origin.z > 0.0) t_ground = -ray.origin.z / ray.dir.z;
    if (bvh_) {
        Hit h = bvh_->intersect(ray, 0.0, t_ground);
        if (h.triangle != Hit{}.triangle) {
            hit.surface = Surface::kObject;
            hit.t = h.t;
            hit.triangle = h.triangle;
            hit.point = ray.origin + ray.dir * h.t;
            return hit;
        }
    }
    if (t_ground < std::numeric_limits<double>::infinity()) {
        hit.surface = Surface::kGround;
        hit.t = t_ground;
        hit.point = ray.origin + ray.dir * t_ground;
        hit.point.z = 0.0;
    }
    return hit;
}

MaskImage render_mask(const Scene& scene, const Camera& camera, int workers) {
    MaskImage mask(camera.width, camera.height);
    if (!scene.has_mesh()) return mask;
    for_each_row(camera, workers, [&](int y) {
        for (int x = 0; x < camera.width; ++x) {
            mask.at(x, y) = scene.trace(camera.primary_ray(x, y)).surface == Scene::Surface::kObject;
        }
    });
    return mask;
}

GrayImage render_shadow_map(const Scene& scene, const Camera& camera, const LightParams& light, int grid,
                            std::uint64_t seed, int workers) {
    if (grid < 1) throw Error("render_shadow_map: grid must be >= 1");
    GrayImage shadow(camera.width, camera.height);
    if (!scene.has_mesh()) return shadow;
    const double n_samples = double(grid) * grid;
    for_each_row(camera, workers, [&](int y) {
        for (int x = 0; x < camera.width; ++x) {
            auto hit = scene.trace(camera.primary_ray(x, y));
            if (hit.surface != Scene::Surface::kGround) continue;
            Rng rng(stream_seed(seed, std::uint64_t(y) * camera.width + x));
            int blocked = 0;
            for (const Vec3& q : scene::sample_area_light(light, grid, rng)) {
                Vec3 d = q - hit.point;
                double len = length(d);
                if (scene.bvh().occluded({hit.point, d}, kShadowEpsilon / len, 1.0)) ++blocked;
            }
            shadow.at(x, y) = blocked / n_samples;
        }
    });
    return shadow;
}

RgbImage render_preview(const Scene& scene, const Camera& camera, const LightParams& light,
                        const GrayImage& shadow, int workers) {
    if (!shadow.same_shape(camera.width, camera.height)) throw ShapeError("render_preview: shadow map shape");
    RgbImage out(camera.width, camera.height, Rgb{1.0, 1.0, 1.0});
    if (!scene.has_mesh()) return out;
    Vec3 light_center = scene::light_position(light);
    for_each_row(camera, workers, [&](int y) {
        for (int x = 0; x < camera.width; ++x) {
            Ray ray = camera.primary_ray(x, y);
            auto hit = scene.trace(ray);
            if (hit.surface == Scene::Surface::kGround) {
                double v = std::clamp(1.0 - shadow.at(x, y), 0.0, 1.0);
                out.at(x, y) = {v, v, v};
            } else if (hit.surface == Scene::Surface::kObject) {
                const auto& m = scene.mesh();
                const auto& tri = m.triangles[hit.triangle];
                Vec3 n = normalize(cross(m.vertices[tri[1]] - m.vertices[tri[0]], m.vertices[tri[2]] - m.vertices[tri[0]]));
                if (dot(n, ray.dir) > 0.0) n = -n;
                double lambert = std::max(0.0, dot(n, normalize(light_center - hit.point)));
                double v = std::clamp(kAlbedo * (kAmbient + (1.0 - kAmbient) * lambert), 0.0, 1.0);
                out.at(x, y) = {v, v, v};
            }
        }
    });
    return out;
}

RgbImage render_preview(const Scene& scene, const Camera& camera, const LightParams& light, int grid,
                        std::uint64_t seed, int workers) {
    return render_preview(scene, camera, light, render_shadow_map(scene, camera, light, grid, seed, workers), workers);
}

RenderTriplet render_triplet(const Scene& scene, const Camera& camera, const LightParams& light, int grid,
                             std::uint64_t seed, int workers) {
    RenderTriplet t;
    t.mask = render_mask(scene, camera, workers);
    t.shadow = render_shadow_map(scene, camera, light, grid, seed, workers);
    t.preview = render_preview(scene, camera, light, t.shadow, workers);
    t.params = light;
    t.mesh_name = scene.has_mesh() ? scene.mesh().name : std::string{};
    t.seed = seed;
    t.grid = grid;
    return t;
}

GrayImage object_gray(const RenderTriplet& triplet) {
    GrayImage gray = luminance(triplet.preview);
    for (std::size_t i = 0; i < gray.size(); ++i) {
        if (!triplet.mask.pixels[i]) gray.pixels[i] = 0.0;
    }
    return gray;
}

}  // namespace umbra::render
