// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/bvh.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "umbra/error.hpp"

namespace umbra::render {
namespace {

using scene::Ray;

struct InvRay {
    Vec3 origin;
    Vec3 inv;
};

/// Slab test with slack so that a triangle hit is never culled by rounding in the box test.
bool box_hit(const Aabb& box, const InvRay& r, double t_min, double t_max, double& t_enter) {
    double lo = t_min, hi = t_max;
    for (int a = 0; a < 3; ++a) {
        double t0 = (box.lo[a] - r.origin[a]) * r.inv[a];
        double t1 = (box.hi[a] - r.origin[a]) * r.inv[a];
        // 0 * inf = NaN when the origin lies on a slab of an axis-parallel ray; fmin/fmax drop it.
        double near = std::fmin(t0, t1), far = std::fmax(t0, t1);
        if (std::isnan(near)) near = -std::numeric_limits<double>::infinity();
        if (std::isnan(far)) far = std::numeric_limits<double>::infinity();
        far = far * (1.0 + 1e-9) + 1e-12;
        near = near - std::abs(near) * 1e-9 - 1e-12;
        lo = std::max(lo, near);
        hi = std::min(hi, far);
        if (lo > hi) return false;
    }
    t_enter = lo;
    return true;
}

}  // namespace

std::optional<double> intersect_triangle(const Ray& ray, Vec3 a, Vec3 b, Vec3 c, double t_min, double t_max) {
    Vec3 e1 = b - a;
    Vec3 e2 = c - a;
    Vec3 p = cross(ray.dir, e2);
    double det = dot(e1, p);
    if (det == 0.0) return std::nullopt;
    double inv = 1.0 / det;
    Vec3 s = ray.origin - a;
    double u = dot(s, p) * inv;
    if (u < 0.0 || u > 1.0) return std::nullopt;
    Vec3 q = cross(s, e1);
    double v = dot(ray.dir, q) * inv;
    if (v < 0.0 || u + v > 1.0) return std::nullopt;
    double t = dot(e2, q) * inv;
    if (!(t > t_min && t < t_max)) return std::nullopt;
    return t;
}

Hit brute_force_intersect(const mesh::TriangleMesh& mesh, const Ray& ray, double t_min, double t_max) {
    Hit best;
    best.t = t_max;
    bool found = false;
    for (std::uint32_t i = 0; i < mesh.triangles.size(); ++i) {
        const auto& tri = mesh.triangles[i];
        auto t = intersect_triangle(ray, mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]],
                                    t_min, t_max);
        if (t && (*t < best.t || (*t == best.t && i < best.triangle))) {
            best = {*t, i};
            found = true;
        }
    }
    return found ? best : Hit{};
}

Bvh::Bvh(const mesh::TriangleMesh& mesh) : mesh_(&mesh) {
    if (mesh.triangles.empty()) throw GeometryError("build_bvh: mesh '" + mesh.name + "' has no triangles");
    std::size_t n = mesh.triangles.size();
    order_.resize(n);
    std::vector<Vec3> centroids(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        order_[i] = i;
        const auto& t = mesh.triangles[i];
        centroids[i] = (mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]]) / 3.0;
    }
    nodes_.reserve(2 * n);
    build(0, static_cast<std::uint32_t>(n), centroids);
}

std::uint32_t Bvh::build(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids) {
    auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    Aabb box, centroid_box;
    for (std::uint32_t i = begin; i < end; ++i) {
        const auto& t = mesh_->triangles[order_[i]];
        for (std::uint32_t v : t) box.extend(mesh_->vertices[v]);
        centroid_box.extend(centroids[order_[i]]);
    }
    nodes_[index].box = box;
    if (end - begin <= kMaxLeafSize) {
        nodes_[index].right_or_first = begin;
        nodes_[index].count = static_cast<std::uint16_t>(end - begin);
        return index;
    }
    int axis = centroid_box.longest_axis();
    std::uint32_t mid = begin + (end - begin) / 2;
    // Full sort with an index tie-break keeps construction deterministic.
    std::sort(order_.begin() + begin, order_.begin() + end, [&](std::uint32_t a, std::uint32_t b) {
        double ca = centroids[a][axis], cb = centroids[b][axis];
        return ca < cb || (ca == cb && a < b);
    });
    build(begin, mid, centroids);
    std::uint32_t right = build(mid, end, centroids);
    nodes_[index].right_or_first = right;
    return index;
}

template <bool AnyHit>
Hit Bvh::traverse(const Ray& ray, double t_min, double t_max) const {
    InvRay r{ray.origin, {1.0 / ray.dir.x, 1.0 / ray.dir.y, 1.0 / ray.dir.z}};
    Hit best;
    best.t = t_max;
    bool found = false;
    std::array<std::uint32_t, 128> stack;
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        std::uint32_t ni = stack[--top];
        const Node& node = nodes_[ni];
        double t_enter;
        if (!box_hit(node.box, r, t_min, best.t, t_enter)) continue;
        if (node.is_leaf()) {
            for (std::uint32_t k = node.right_or_first; k < node.right_or_first + node.count; ++k) {
                std::uint32_t tri_index = order_[k];
                const auto& tri = mesh_->triangles[tri_index];
                auto t = intersect_triangle(ray, mesh_->vertices[tri[0]], mesh_->vertices[tri[1]],
                                            mesh_->vertices[tri[2]], t_min, t_max);
                if (!t) continue;
                if (AnyHit) return Hit{*t, tri_index};
                if (*t < best.t || (*t == best.t && tri_index < best.triangle)) {
                    best = {*t, tri_index};
                    found = true;
                }
            }
            continue;
        }
        std::uint32_t left = ni + 1, right = node.right_or_first;
        double tl, tr;
        bool hl = box_hit(nodes_[left].box, r, t_min, best.t, tl);
        bool hr = box_hit(nodes_[right].box, r, t_min, best.t, tr);
        if (hl && hr) {
            // Push the farther child first so the nearer one is visited next.
            if (tl <= tr) {
                stack[top++] = right;
                stack[top++] = left;
            } else {
                stack[top++] = left;
                stack[top++] = right;
            }
        } else if (hl) {
            stack[top++] = left;
        } else if (hr) {
            stack[top++] = right;
        }
    }
    return found ? best : Hit{};
}

Hit Bvh::intersect(const Ray& ray, double t_min, double t_max) const { return traverse<false>(ray, t_min, t_max); }

bool Bvh::occluded(const Ray& ray, double t_min, double t_max) const {
    return traverse<true>(ray, t_min, t_max).triangle != Hit{}.triangle;
}

}  // namespace umbra::render
