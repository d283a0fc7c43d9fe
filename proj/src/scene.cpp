// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/scene.hpp"

#include <cmath>
#include <numbers>

#include "umbra/error.hpp"

namespace umbra::scene {
namespace {

constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

struct CameraBasis {
    Vec3 forward, right, up;
    double tan_half;
};

CameraBasis basis(const Camera& cam) {
    Vec3 f = normalize(cam.look_at - cam.position);
    Vec3 r = normalize(cross(f, cam.up));
    Vec3 u = cross(r, f);
    return {f, r, u, std::tan(deg2rad(cam.vertical_fov) * 0.5)};
}

}  // namespace

void to_json(nlohmann::json& j, const LightParams& p) {
    j = nlohmann::json{{"theta", p.theta}, {"phi", p.phi}, {"size", p.size}, {"intensity", p.intensity},
                       {"radius", p.radius}};
}

void from_json(const nlohmann::json& j, LightParams& p) {
    LightParams d;
    p.theta = j.value("theta", d.theta);
    p.phi = j.value("phi", d.phi);
    p.size = j.value("size", d.size);
    p.intensity = j.value("intensity", d.intensity);
    p.radius = j.value("radius", d.radius);
}

void Camera::validate() const {
    if (position == look_at) throw GeometryError("camera position equals look_at");
    if (!(vertical_fov > 0.0 && vertical_fov < 180.0)) throw GeometryError("camera fov must be in (0,180)");
    if (width <= 0 || height <= 0) throw GeometryError("camera image size must be positive");
    if (length(cross(look_at - position, up)) < 1e-12) throw GeometryError("camera up is parallel to view");
}

Ray Camera::primary_ray(int px, int py) const {
    CameraBasis b = basis(*this);
    double aspect = double(width) / height;
    double sx = ((px + 0.5) / width * 2.0 - 1.0) * b.tan_half * aspect;
    double sy = (1.0 - (py + 0.5) / height * 2.0) * b.tan_half;
    return {position, normalize(b.forward + b.right * sx + b.up * sy)};
}

std::array<double, 2> Camera::project(Vec3 p) const {
    CameraBasis b = basis(*this);
    Vec3 d = p - position;
    double depth = dot(d, b.forward);
    double aspect = double(width) / height;
    double sx = dot(d, b.right) / depth / (b.tan_half * aspect);
    double sy = dot(d, b.up) / depth / b.tan_half;
    return {(sx + 1.0) * 0.5 * width, (1.0 - sy) * 0.5 * height};
}

Camera dolly_camera(double distance, int width, int height) {
    Camera cam;
    cam.position = {0.0, -distance, distance / 3.0};
    cam.width = width;
    cam.height = height;
    return cam;
}

Vec3 light_position(const LightParams& p) {
    double t = deg2rad(p.theta), f = deg2rad(p.phi);
    return {p.radius * std::sin(t) * std::cos(f), p.radius * std::sin(t) * std::sin(f), p.radius * std::cos(t)};
}

LightFrame light_frame(const LightParams& p) {
    LightFrame frame;
    frame.center = light_position(p);
    frame.dir = normalize(-frame.center);
    Vec3 c = cross(Vec3{0, 0, 1}, frame.dir);
    if (length(c) < 1e-6) {
        frame.u = {1, 0, 0};
        frame.v = {0, 1, 0};
    } else {
        frame.u = normalize(c);
        frame.v = cross(frame.dir, frame.u);
    }
    return frame;
}

std::vector<Vec3> sample_area_light(const LightParams& p, int grid, Rng& rng) {
    if (grid < 1) throw Error("sample_area_light: grid must be >= 1");
    LightFrame frame = light_frame(p);
    std::vector<Vec3> points;
    points.reserve(std::size_t(grid) * grid);
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            double a = ((i + uniform01(rng)) / grid - 0.5) * p.size;
            double b = ((j + uniform01(rng)) / grid - 0.5) * p.size;
            points.push_back(frame.center + frame.u * a + frame.v * b);
        }
    }
    return points;
}

std::array<double, 2> blob_center(const LightParams& p, int width, int height) {
    double t = deg2rad(p.theta), f = deg2rad(p.phi);
    double x = std::sin(t) * std::cos(f);  // in [-1,1] after dividing by r
    double y = std::sin(t) * std::sin(f);
    return {(x + 1.0) * 0.5 * width, (1.0 - (y + 1.0) * 0.5) * height};
}

GrayImage blob_map(const LightParams& p, int width, int height) {
    if (width <= 0 || height <= 0) throw Error("blob_map: resolution must be positive");
    auto [cx, cy] = blob_center(p, width, height);
    double sigma = width / 64.0 * p.size;
    double inv = 1.0 / (2.0 * sigma * sigma);
    GrayImage img(width, height);
    double peak = 0.0;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
            double d2 = dx * dx + dy * dy;
            img.at(x, y) = std::exp(-d2 * inv);
            peak = std::max(peak, img.at(x, y));
        }
    }
    if (peak > 0.0) {
        for (double& v : img.pixels) v /= peak;
    }
    return img;
}

}  // namespace umbra::scene
