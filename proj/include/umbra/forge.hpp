// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "umbra/image.hpp"
#include "umbra/mesh.hpp"
#include "umbra/render.hpp"
#include "umbra/rng.hpp"
#include "umbra/scene.hpp"

namespace umbra::forge {

/// Training-set light intervals (integer degrees / integer size, both ends inclusive).
inline constexpr int kThetaMin = 0, kThetaMax = 45;
inline constexpr int kPhiMin = 0, kPhiMax = 360;
inline constexpr int kSizeMin = 2, kSizeMax = 8;
inline constexpr double kLightRadius = 8.0;
inline constexpr double kDollyMin = 5.0, kDollyMax = 9.0;
inline constexpr double kBenchmarkDistance = 6.0;

/// Uniform integer θ, φ, s from the training intervals; intensity 1, radius 8.
scene::LightParams sample_training_params(Rng& rng);

enum class Split { kTrain, kTrack1, kTrack2, kTrack3 };
std::string to_string(Split split);
Split split_from_string(const std::string& s);

struct TrackItem {
    std::size_t mesh_index = 0;
    scene::LightParams params;
};

/// Track light grids; each mesh is paired with every grid value:
///   1: θ=30, φ=0, s ∈ {2,4,8}
///   2: θ=35, s=2, φ ∈ {0,20,…,340}
///   3: φ=0, s=2, θ ∈ {5,10,…,45}
/// Pure in its arguments. Throws ConfigError for an unknown track id or empty mesh list.
std::vector<TrackItem> generate_track(int track, std::size_t mesh_count);
std::vector<scene::LightParams> track_grid(int track);

/// Benchmark mesh counts per track (50 / 15 / 15); tracks use the first N meshes.
std::size_t track_mesh_limit(int track);

enum class PrimitiveKind { kBox, kCylinder, kTorus, kCone, kComposite };
std::string to_string(PrimitiveKind kind);
PrimitiveKind primitive_from_string(const std::string& s);
inline constexpr int kDefaultSegments = 32;

/// Procedural stand-in for artist meshes, with random proportions; normalized and settled.
/// Triangle counts: box 12, cylinder 4·seg, cone 2·seg, torus 2·seg·(seg/2),
/// composite = box + cylinder.
mesh::TriangleMesh make_primitive_mesh(PrimitiveKind kind, Rng& rng, int segments = kDefaultSegments);

/// `count` primitives cycling through all kinds, named "<kind>_<index>".
std::vector<mesh::TriangleMesh> make_primitive_set(std::size_t count, std::uint64_t seed);

/// Pixelwise min(1, intensity · value).
GrayImage intensity_augment(const GrayImage& shadow, double intensity);

struct RendererConfig {
    int resolution = 64;
    int grid = render::kDefaultGrid;
    int workers = 0;
};

struct ManifestEntry {
    std::string id;
    Split split = Split::kTrain;
    std::string mesh;
    std::uint64_t seed = 0;
    scene::LightParams params;
    double rotation_deg = 0.0;
    double camera_distance = kBenchmarkDistance;
    int grid = render::kDefaultGrid;
    int resolution = 64;
    // Paths relative to the dataset root.
    std::string preview;
    std::string mask;
    std::string shadow;
    std::string meta;

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

void to_json(nlohmann::json& j, const ManifestEntry& e);
void from_json(const nlohmann::json& j, ManifestEntry& e);

inline constexpr int kManifestVersion = 1;

/// JSON-lines manifest: a header line {"format","version"} then one entry per line.
struct DatasetManifest {
    int version = kManifestVersion;
    std::vector<ManifestEntry> entries;

    std::string serialize() const;
    static DatasetManifest parse(const std::string& text);
    void write(const std::filesystem::path& path) const;
    /// Reads and checks that every referenced file exists under `root`.
    static DatasetManifest read(const std::filesystem::path& path, const std::filesystem::path& root);
};

struct ForgeFailure {
    std::size_t index = 0;
    std::string message;
};

struct ForgeResult {
    DatasetManifest manifest;
    std::vector<ForgeFailure> failures;
};

/// Renders `count` random triplets under `root/train/` and writes `root/train.jsonl`.
/// Entry i depends only on (seed, i), so output is independent of worker count.
/// A failing entry is recorded in `failures` and skipped.
ForgeResult forge_dataset(const std::vector<mesh::TriangleMesh>& meshes, std::size_t count, std::uint64_t seed,
                          const RendererConfig& config, const std::filesystem::path& root);

/// Renders a benchmark track with the fixed benchmark camera under `root/track<N>/`
/// and writes `root/track<N>.jsonl`.
ForgeResult forge_track(int track, const std::vector<mesh::TriangleMesh>& meshes, const RendererConfig& config,
                        const std::filesystem::path& root, std::uint64_t seed = 0);

/// File name stem for entry `index` of `split`.
std::string entry_id(Split split, std::size_t index);

/// Writes a triplet as <dir>/<id>.{preview,mask,shadow}.png + <id>.json.
void write_triplet(const std::filesystem::path& dir, const std::string& id, const render::RenderTriplet& t,
                   const nlohmann::json& extra = nlohmann::json::object());

}  // namespace umbra::forge
