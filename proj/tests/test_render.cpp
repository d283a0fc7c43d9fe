// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "oracles.hpp"
#include "umbra/bvh.hpp"
#include "umbra/error.hpp"
#include "umbra/forge.hpp"
#include "umbra/metrics.hpp"
#include "umbra/render.hpp"

using namespace umbra;
using render::Bvh;

namespace {

void check_subtree(const Bvh& bvh, std::uint32_t index, const mesh::TriangleMesh& m, int& leaves) {
    const auto& node = bvh.nodes()[index];
    if (node.is_leaf()) {
        ++leaves;
        EXPECT_LE(node.count, Bvh::kMaxLeafSize);
        for (std::uint32_t k = 0; k < node.count; ++k) {
            const auto& t = m.triangles[bvh.order()[node.right_or_first + k]];
            Aabb tb;
            for (auto v : t) tb.extend(m.vertices[v]);
            EXPECT_TRUE(node.box.contains(tb));
        }
        return;
    }
    std::uint32_t left = index + 1, right = node.right_or_first;
    EXPECT_TRUE(node.box.contains(bvh.nodes()[left].box));
    EXPECT_TRUE(node.box.contains(bvh.nodes()[right].box));
    check_subtree(bvh, left, m, leaves);
    check_subtree(bvh, right, m, leaves);
}

scene::LightParams light(double theta, double phi, double size) {
    scene::LightParams p;
    p.theta = theta;
    p.phi = phi;
    p.size = size;
    return p;
}

}  // namespace

TEST(IntersectTriangle, AnalyticHit) {
    scene::Ray ray{{0.25, 0.25, 5.0}, {0.0, 0.0, -2.0}};
    auto t = render::intersect_triangle(ray, {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, 0.0, 10.0);
    ASSERT_TRUE(t);
    EXPECT_DOUBLE_EQ(*t, 2.0);
    EXPECT_FALSE(render::intersect_triangle(ray, {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, 0.0, 1.5));
    scene::Ray miss{{0.9, 0.9, 5.0}, {0.0, 0.0, -1.0}};
    EXPECT_FALSE(render::intersect_triangle(miss, {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, 0.0, 10.0));
}

TEST(Bvh, EmptyMeshIsAnError) {
    mesh::TriangleMesh empty;
    EXPECT_THROW(Bvh{empty}, GeometryError);
}

TEST(Bvh, SingleTriangleIsOneLeaf) {
    mesh::TriangleMesh m = oracle::random_soup(1, 1);
    Bvh bvh(m);
    ASSERT_EQ(bvh.nodes().size(), 1u);
    EXPECT_TRUE(bvh.nodes()[0].is_leaf());
}

TEST(Bvh, NodeBoxesContainTheirSubtrees) {
    for (auto m : {oracle::unit_cube(), oracle::random_soup(500, 2)}) {
        Bvh bvh(m);
        int leaves = 0;
        check_subtree(bvh, 0, m, leaves);
        EXPECT_GT(leaves, 0);
        auto order = bvh.order();
        std::sort(order.begin(), order.end());
        for (std::uint32_t i = 0; i < order.size(); ++i) ASSERT_EQ(order[i], i);
    }
}

TEST(Bvh, NearestHitMatchesAllTriangleLoop) {
    mesh::TriangleMesh m = oracle::random_soup(500, 3);
    Bvh bvh(m);
    int hits = 0;
    for (const auto& ray : oracle::random_rays(1000, 4)) {
        render::Hit a = bvh.intersect(ray), b = oracle::nearest_hit(m, ray);
        ASSERT_EQ(a.triangle, b.triangle);
        ASSERT_EQ(a.t, b.t);
        EXPECT_EQ(bvh.occluded(ray, 0.0, std::numeric_limits<double>::infinity()), b.triangle != render::Hit{}.triangle);
        hits += b.triangle != render::Hit{}.triangle;
    }
    EXPECT_GT(hits, 300);
}

TEST(Bvh, ConstructionIsDeterministic) {
    mesh::TriangleMesh m = oracle::random_soup(200, 5);
    Bvh a(m), b(m);
    EXPECT_EQ(a.order(), b.order());
    ASSERT_EQ(a.nodes().size(), b.nodes().size());
}

TEST(RenderMask, EmptySceneIsBlank) {
    render::Scene empty;
    MaskImage mask = render::render_mask(empty, scene::dolly_camera(6.0, 32, 32));
    for (auto v : mask.pixels) EXPECT_EQ(v, 0);
}

TEST(RenderMask, CubeCentroidMatchesProjection) {
    render::Scene sc(mesh::settle(oracle::unit_cube(-0.5, 0.5)));
    scene::Camera cam;
    MaskImage mask = render::render_mask(sc, cam);
    GrayImage g(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.size(); ++i) g.pixels[i] = mask.pixels[i];
    auto c = metrics::centroid(g);
    auto p = cam.project({0.0, 0.0, 0.5});
    EXPECT_LT(std::hypot(c[0] - p[0], c[1] - p[1]), 5.0);
}

TEST(RenderMask, MatchesBruteForceRenderer) {
    auto meshes = forge::make_primitive_set(5, 21);
    for (const auto& m : meshes) {
        render::Scene sc(m);
        scene::Camera cam = scene::dolly_camera(6.0, 64, 64);
        EXPECT_EQ(render::render_mask(sc, cam), oracle::brute_force_mask(&sc.mesh(), cam)) << m.name;
    }
}

TEST(RenderShadowMap, EmptySceneIsBlank) {
    render::Scene empty;
    GrayImage s = render::render_shadow_map(empty, scene::dolly_camera(6.0, 16, 16), light(30, 0, 2), 4, 1);
    for (double v : s.pixels) EXPECT_EQ(v, 0.0);
}

TEST(RenderShadowMap, RejectsEmptyGrid) {
    render::Scene sc(oracle::unit_cube());
    EXPECT_THROW(render::render_shadow_map(sc, scene::dolly_camera(6.0, 8, 8), light(30, 0, 2), 0, 1), Error);
}

TEST(RenderShadowMap, PlateFullyOccludesTheLight) {
    // A wide plate at z = 2 hides the whole light square from every ground point below it.
    mesh::TriangleMesh plate;
    plate.vertices = {{-30, -30, 2}, {30, -30, 2}, {30, 30, 2}, {-30, 30, 2}};
    plate.triangles = {{0, 1, 2}, {0, 2, 3}};
    render::Scene sc(plate);
    scene::Camera cam;
    cam.position = {6.0, 0.0, 1.0};
    cam.width = cam.height = 32;
    GrayImage s = render::render_shadow_map(sc, cam, light(0, 0, 4), 8, 3);
    for (int x = 0; x < 32; ++x) EXPECT_EQ(s.at(x, 16), 1.0);
}

TEST(RenderShadowMap, PenumbraWidthFollowsSimilarTriangles) {
    for (double s : {2.0, 4.0, 8.0}) {
        auto m = oracle::measure_penumbra(s, 128, 16, 7, 0);
        EXPECT_LT(m.relative_error(), 0.15) << "s=" << s << " measured " << m.measured << " expected " << m.expected;
    }
}

TEST(RenderShadowMap, ValuesAreQuantizedBoundedAndOffObject) {
    auto meshes = forge::make_primitive_set(2, 5);
    render::Scene sc(meshes[1]);
    scene::Camera cam = scene::dolly_camera(6.0, 48, 48);
    const int grid = 6;
    auto t = render::render_triplet(sc, cam, light(30, 45, 4), grid, 5);
    int shaded = 0;
    for (std::size_t i = 0; i < t.shadow.size(); ++i) {
        double v = t.shadow.pixels[i];
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        EXPECT_DOUBLE_EQ(v * grid * grid, std::round(v * grid * grid));
        if (t.mask.pixels[i]) {
            EXPECT_EQ(v, 0.0);
        }
        shaded += v > 0.0;
    }
    EXPECT_GT(shaded, 0);
}

TEST(RenderShadowMap, BitIdenticalAcrossWorkerCounts) {
    auto meshes = forge::make_primitive_set(1, 6);
    render::Scene sc(meshes[0]);
    scene::Camera cam = scene::dolly_camera(6.0, 48, 48);
    GrayImage one = render::render_shadow_map(sc, cam, light(25, 200, 3), 8, 11, 1);
    for (int workers : {2, 4, 8}) {
        EXPECT_EQ(render::render_shadow_map(sc, cam, light(25, 200, 3), 8, 11, workers), one) << workers;
    }
}

TEST(RenderShadowMap, LargerLightsGiveSofterBoundaries) {
    render::Scene sc(mesh::prepare(oracle::unit_cube()));
    scene::Camera cam = scene::dolly_camera(6.0, 96, 96);
    double prev = std::numeric_limits<double>::infinity();
    for (double s : {2.0, 4.0, 8.0}) {
        double g = metrics::boundary_gradient(render::render_shadow_map(sc, cam, light(30, 0, s), 16, 1));
        EXPECT_LT(g, prev) << "s=" << s;
        prev = g;
    }
}

TEST(RenderPreview, EmptySceneIsWhite) {
    render::Scene empty;
    RgbImage img = render::render_preview(empty, scene::dolly_camera(6.0, 8, 8), light(30, 0, 2), 4, 1);
    for (const auto& c : img.pixels) EXPECT_EQ(c, (Rgb{1.0, 1.0, 1.0}));
}

TEST(RenderPreview, RangeAndDarkeningMatchesShadowSupport) {
    auto meshes = forge::make_primitive_set(1, 8);
    render::Scene sc(meshes[0]);
    scene::Camera cam = scene::dolly_camera(6.0, 64, 64);
    auto t = render::render_triplet(sc, cam, light(30, 300, 4), 8, 2);
    double inter = 0.0, uni = 0.0;
    for (std::size_t i = 0; i < t.preview.size(); ++i) {
        for (double c : t.preview.pixels[i]) {
            EXPECT_GE(c, 0.0);
            EXPECT_LE(c, 1.0);
        }
        if (t.mask.pixels[i]) continue;
        bool dark = t.preview.pixels[i][0] < 1.0;
        bool support = t.shadow.pixels[i] > 0.0;
        inter += dark && support;
        uni += dark || support;
    }
    ASSERT_GT(uni, 0.0);
    EXPECT_GT(inter / uni, 0.95);
}

TEST(ObjectGray, IsZeroOffTheMask) {
    auto meshes = forge::make_primitive_set(1, 9);
    render::Scene sc(meshes[0]);
    auto t = render::render_triplet(sc, scene::dolly_camera(6.0, 32, 32), light(30, 0, 2), 4, 1);
    GrayImage g = render::object_gray(t);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!t.mask.pixels[i]) {
            EXPECT_EQ(g.pixels[i], 0.0);
        }
    }
}
