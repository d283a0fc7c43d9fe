// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "umbra/vec3.hpp"

namespace umbra::mesh {

using Triangle = std::array<std::uint32_t, 3>;

/// Indexed triangle geometry in scene units, z-up.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    std::string name;

    bool empty() const { return triangles.empty(); }
    Aabb bounds() const;
    double triangle_area(std::size_t t) const;
};

/// Triangles smaller than this area are dropped on parse.
inline constexpr double kDegenerateArea = 1e-12;
inline constexpr double kDefaultExtent = 2.0;

struct ObjParseResult {
    TriangleMesh mesh;
    std::size_t dropped_degenerate = 0;
};

/// Parses the `v`/`f` subset of Wavefront OBJ. Polygons are fan-triangulated,
/// negative (relative) indices are resolved, other directives are ignored.
/// Throws ParseError carrying the 1-based line number.
ObjParseResult parse_obj(std::string_view text, std::string name = {});

ObjParseResult load_obj(const std::filesystem::path& path);

/// Emits the same subset; coordinates are printed with round-trip precision.
std::string write_obj(const TriangleMesh& mesh);

void save_obj(const std::filesystem::path& path, const TriangleMesh& mesh);

/// Uniformly scales so the largest bounding-box side equals `target_extent` and
/// centres the box at the origin. Throws GeometryError for zero-extent meshes.
TriangleMesh normalize_mesh(const TriangleMesh& mesh, double target_extent = kDefaultExtent);

/// Rotates about the z-axis through the origin.
TriangleMesh rotate_z(const TriangleMesh& mesh, double degrees);

/// Rests the mesh on the ground plane by translating along z so min z = 0.
/// Stands in for rigid-body settling; orientation is left as authored.
TriangleMesh settle(const TriangleMesh& mesh);

/// normalize_mesh followed by settle.
TriangleMesh prepare(const TriangleMesh& mesh, double target_extent = kDefaultExtent);

}  // namespace umbra::mesh
