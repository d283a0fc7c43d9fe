// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "umbra/mesh.hpp"
#include "umbra/scene.hpp"

namespace umbra::render {

struct Hit {
    double t = std::numeric_limits<double>::infinity();
    std::uint32_t triangle = std::numeric_limits<std::uint32_t>::max();
};

/// Möller-Trumbore; returns t when the ray hits the triangle with t in (t_min, t_max).
std::optional<double> intersect_triangle(const scene::Ray& ray, Vec3 a, Vec3 b, Vec3 c, double t_min,
                                         double t_max);

/// Binary BVH over a triangle mesh: median split on the longest centroid axis,
/// at most kMaxLeafSize triangles per leaf. Nodes are stored depth-first with the
/// left child immediately after its parent.
class Bvh {
public:
    static constexpr int kMaxLeafSize = 4;

    struct Node {
        Aabb box;
        std::uint32_t right_or_first = 0;  // interior: right child index; leaf: first slot in order()
        std::uint16_t count = 0;           // 0 for interior nodes
        bool is_leaf() const { return count > 0; }
    };

    /// Throws GeometryError for an empty mesh. Keeps a reference to `mesh`.
    explicit Bvh(const mesh::TriangleMesh& mesh);

    /// Nearest hit with t in (t_min, t_max). Ties in t resolve to the lowest triangle index.
    Hit intersect(const scene::Ray& ray, double t_min = 0.0,
                  double t_max = std::numeric_limits<double>::infinity()) const;

    /// True if any triangle is hit with t in (t_min, t_max).
    bool occluded(const scene::Ray& ray, double t_min, double t_max) const;

    const std::vector<Node>& nodes() const { return nodes_; }
    /// Permutation of mesh triangle indices referenced by leaves.
    const std::vector<std::uint32_t>& order() const { return order_; }
    const mesh::TriangleMesh& source() const { return *mesh_; }

private:
    std::uint32_t build(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids);
    template <bool AnyHit>
    Hit traverse(const scene::Ray& ray, double t_min, double t_max) const;

    const mesh::TriangleMesh* mesh_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> order_;
};

/// Reference nearest-hit over all triangles, used to validate the BVH.
Hit brute_force_intersect(const mesh::TriangleMesh& mesh, const scene::Ray& ray, double t_min = 0.0,
                          double t_max = std::numeric_limits<double>::infinity());

}  // namespace umbra::render
