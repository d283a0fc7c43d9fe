// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "umbra/image.hpp"
#include "umbra/rng.hpp"
#include "umbra/vec3.hpp"

namespace umbra::scene {

/// Light pose on a sphere around the object plus square size and shadow intensity.
/// Angles are in degrees: theta is polar (0 = overhead), phi is azimuth from +x.
struct LightParams {
    double theta = 30.0;
    double phi = 0.0;
    double size = 2.0;
    double intensity = 1.0;
    double radius = 8.0;

    friend bool operator==(const LightParams&, const LightParams&) = default;
};

void to_json(nlohmann::json& j, const LightParams& p);
void from_json(const nlohmann::json& j, LightParams& p);

struct Ray {
    Vec3 origin;
    Vec3 dir;  // not necessarily unit
};

/// Pinhole camera. Pixel (0,0) is the top-left corner of the image.
struct Camera {
    Vec3 position{0.0, -6.0, 2.0};
    Vec3 look_at{0.0, 0.0, 0.0};
    Vec3 up{0.0, 0.0, 1.0};
    double vertical_fov = 40.0;
    int width = 256;
    int height = 256;

    /// Throws GeometryError when position == look_at or the fov is out of (0,180).
    void validate() const;
    /// Ray through the centre of pixel (px, py); dir is unit length.
    Ray primary_ray(int px, int py) const;
    /// Continuous pixel coordinates of a world point in front of the camera; pixel i spans [i, i+1).
    std::array<double, 2> project(Vec3 p) const;
};

/// Benchmark camera at `distance` along -y, keeping the default elevation.
Camera dolly_camera(double distance, int width, int height);

/// (r sinθ cosφ, r sinθ sinφ, r cosθ).
Vec3 light_position(const LightParams& p);

/// Orthonormal frame of the light square. `dir` points from the light centre to the origin.
struct LightFrame {
    Vec3 center;
    Vec3 dir;
    Vec3 u;
    Vec3 v;
};
LightFrame light_frame(const LightParams& p);

/// grid x grid stratified-jittered points on the light square, one per cell,
/// ordered row-major over (u, v) cells.
std::vector<Vec3> sample_area_light(const LightParams& p, int grid, Rng& rng);

/// Gaussian-blob light map: centre at (r sinθ cosφ, r sinθ sinφ) mapped from [-r,r]^2
/// onto the image (+x right, +y up); sigma = (width/64) * size pixels; peak value 1.
GrayImage blob_map(const LightParams& p, int width, int height);

/// Continuous image coordinates of the blob centre; pixel (i, j) has its centre at (i + 0.5, j + 0.5).
std::array<double, 2> blob_center(const LightParams& p, int width, int height);

}  // namespace umbra::scene
