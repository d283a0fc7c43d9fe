// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/mesh.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "umbra/error.hpp"

namespace umbra::mesh {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

double parse_double(std::string_view tok, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        throw ParseError(line, "malformed number '" + std::string(tok) + "'");
    }
    return v;
}

/// Resolves one face corner ("7", "7/1", "7//3", "-2") to a 0-based index.
std::uint32_t parse_index(std::string_view tok, std::size_t vertex_count, std::size_t line) {
    std::string_view head = tok.substr(0, tok.find('/'));
    long long idx = 0;
    auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), idx);
    if (ec != std::errc{} || ptr != head.data() + head.size() || idx == 0) {
        throw ParseError(line, "malformed face index '" + std::string(tok) + "'");
    }
    long long resolved = idx > 0 ? idx - 1 : static_cast<long long>(vertex_count) + idx;
    if (resolved < 0 || resolved >= static_cast<long long>(vertex_count)) {
        throw ParseError(line, "face index " + std::to_string(idx) + " out of range (" +
                                   std::to_string(vertex_count) + " vertices)");
    }
    return static_cast<std::uint32_t>(resolved);
}

TriangleMesh transformed(const TriangleMesh& mesh, auto&& fn) {
    TriangleMesh out = mesh;
    for (Vec3& v : out.vertices) v = fn(v);
    return out;
}

}  // namespace

Aabb TriangleMesh::bounds() const {
    Aabb box;
    for (const Vec3& v : vertices) box.extend(v);
    return box;
}

double TriangleMesh::triangle_area(std::size_t t) const {
    const Triangle& tri = triangles[t];
    Vec3 a = vertices[tri[0]], b = vertices[tri[1]], c = vertices[tri[2]];
    return 0.5 * length(cross(b - a, c - a));
}

ObjParseResult parse_obj(std::string_view text, std::string name) {
    ObjParseResult result;
    TriangleMesh& mesh = result.mesh;
    mesh.name = std::move(name);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        if (tokens[0] == "v") {
            // A trailing w or vertex colour is tolerated.
            if (tokens.size() < 4) throw ParseError(line_no, "vertex needs 3 coordinates");
            mesh.vertices.push_back({parse_double(tokens[1], line_no), parse_double(tokens[2], line_no),
                                     parse_double(tokens[3], line_no)});
        } else if (tokens[0] == "f") {
            if (tokens.size() < 4) throw ParseError(line_no, "face needs at least 3 vertices");
            std::vector<std::uint32_t> corners;
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                corners.push_back(parse_index(tokens[i], mesh.vertices.size(), line_no));
            }
            for (std::size_t i = 1; i + 1 < corners.size(); ++i) {
                mesh.triangles.push_back({corners[0], corners[i], corners[i + 1]});
                if (mesh.triangle_area(mesh.triangles.size() - 1) <= kDegenerateArea) {
                    mesh.triangles.pop_back();
                    ++result.dropped_degenerate;
                }
            }
        }
    }
    return result;
}

ObjParseResult load_obj(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_obj(buffer.str(), path.stem().string());
}

std::string write_obj(const TriangleMesh& mesh) {
    std::string out;
    if (!mesh.name.empty()) out += "# " + mesh.name + "\n";
    char buf[128];
    for (const Vec3& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
        out += buf;
    }
    for (const Triangle& t : mesh.triangles) {
        std::snprintf(buf, sizeof buf, "f %u %u %u\n", t[0] + 1, t[1] + 1, t[2] + 1);
        out += buf;
    }
    return out;
}

void save_obj(const std::filesystem::path& path, const TriangleMesh& mesh) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << write_obj(mesh);
}

TriangleMesh normalize_mesh(const TriangleMesh& mesh, double target_extent) {
    Aabb box = mesh.bounds();
    if (box.empty()) throw GeometryError("normalize_mesh: mesh has no vertices");
    Vec3 e = box.extent();
    double largest = std::max({e.x, e.y, e.z});
    if (!(largest > 0.0)) throw GeometryError("normalize_mesh: zero-extent mesh '" + mesh.name + "'");
    double scale = target_extent / largest;
    Vec3 c = box.center();
    return transformed(mesh, [&](Vec3 v) { return (v - c) * scale; });
}

TriangleMesh rotate_z(const TriangleMesh& mesh, double degrees) {
    double rad = degrees * std::numbers::pi / 180.0;
    double cs = std::cos(rad), sn = std::sin(rad);
    return transformed(mesh, [&](Vec3 v) { return Vec3{cs * v.x - sn * v.y, sn * v.x + cs * v.y, v.z}; });
}

TriangleMesh settle(const TriangleMesh& mesh) {
    if (mesh.vertices.empty()) return mesh;
    double min_z = mesh.bounds().lo.z;
    return transformed(mesh, [&](Vec3 v) { return Vec3{v.x, v.y, v.z - min_z}; });
}

TriangleMesh prepare(const TriangleMesh& mesh, double target_extent) {
    return settle(normalize_mesh(mesh, target_extent));
}

}  // namespace umbra::mesh
