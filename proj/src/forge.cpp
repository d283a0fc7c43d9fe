// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/forge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "umbra/error.hpp"
#include "umbra/image_io.hpp"
#include "umbra/parallel.hpp"

namespace umbra::forge {

using mesh::TriangleMesh;
using scene::LightParams;

scene::LightParams sample_training_params(Rng& rng) {
    LightParams p;
    p.theta = std::uniform_int_distribution<int>(kThetaMin, kThetaMax)(rng);
    p.phi = std::uniform_int_distribution<int>(kPhiMin, kPhiMax)(rng);
    p.size = std::uniform_int_distribution<int>(kSizeMin, kSizeMax)(rng);
    p.intensity = 1.0;
    p.radius = kLightRadius;
    return p;
}

std::string to_string(Split split) {
    switch (split) {
        case Split::kTrain: return "train";
        case Split::kTrack1: return "track1";
        case Split::kTrack2: return "track2";
        case Split::kTrack3: return "track3";
    }
    return "train";
}

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::kTrain;
    if (s == "track1") return Split::kTrack1;
    if (s == "track2") return Split::kTrack2;
    if (s == "track3") return Split::kTrack3;
    throw ConfigError("unknown split '" + s + "'");
}

std::vector<LightParams> track_grid(int track) {
    std::vector<LightParams> grid;
    auto make = [](double theta, double phi, double size) {
        LightParams p;
        p.theta = theta;
        p.phi = phi;
        p.size = size;
        p.radius = kLightRadius;
        return p;
    };
    switch (track) {
        case 1:
            for (double s : {2.0, 4.0, 8.0}) grid.push_back(make(30.0, 0.0, s));
            break;
        case 2:
            for (int phi = 0; phi <= 340; phi += 20) grid.push_back(make(35.0, phi, 2.0));
            break;
        case 3:
            for (int theta = 5; theta <= 45; theta += 5) grid.push_back(make(theta, 0.0, 2.0));
            break;
        default:
            throw ConfigError("unknown track id " + std::to_string(track) + " (expected 1, 2 or 3)");
    }
    return grid;
}

std::vector<TrackItem> generate_track(int track, std::size_t mesh_count) {
    auto grid = track_grid(track);
    if (mesh_count == 0) throw ConfigError("generate_track: no meshes");
    std::vector<TrackItem> items;
    items.reserve(mesh_count * grid.size());
    for (std::size_t m = 0; m < mesh_count; ++m) {
        for (const LightParams& p : grid) items.push_back({m, p});
    }
    return items;
}

std::size_t track_mesh_limit(int track) {
    switch (track) {
        case 1: return 50;
        case 2:
        case 3: return 15;
        default: throw ConfigError("unknown track id " + std::to_string(track));
    }
}

std::string to_string(PrimitiveKind kind) {
    switch (kind) {
        case PrimitiveKind::kBox: return "box";
        case PrimitiveKind::kCylinder: return "cylinder";
        case PrimitiveKind::kTorus: return "torus";
        case PrimitiveKind::kCone: return "cone";
        case PrimitiveKind::kComposite: return "composite";
    }
    return "box";
}

PrimitiveKind primitive_from_string(const std::string& s) {
    for (auto k : {PrimitiveKind::kBox, PrimitiveKind::kCylinder, PrimitiveKind::kTorus, PrimitiveKind::kCone,
                   PrimitiveKind::kComposite}) {
        if (to_string(k) == s) return k;
    }
    throw ConfigError("unknown primitive kind '" + s + "'");
}

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::uint32_t add_vertex(TriangleMesh& m, Vec3 v) {
    m.vertices.push_back(v);
    return static_cast<std::uint32_t>(m.vertices.size() - 1);
}

void add_box(TriangleMesh& m, Vec3 lo, Vec3 hi) {
    auto base = static_cast<std::uint32_t>(m.vertices.size());
    for (int i = 0; i < 8; ++i) {
        m.vertices.push_back({(i & 1) ? hi.x : lo.x, (i & 2) ? hi.y : lo.y, (i & 4) ? hi.z : lo.z});
    }
    // Each face as two triangles, wound outward.
    const int quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
    for (const auto& q : quads) {
        m.triangles.push_back({base + q[0], base + q[1], base + q[2]});
        m.triangles.push_back({base + q[0], base + q[2], base + q[3]});
    }
}

/// Closed cylinder (or cone when top_radius == 0) along z, capped with centre fans.
void add_lathe(TriangleMesh& m, Vec3 base_center, double radius, double top_radius, double height, int segments) {
    std::vector<std::uint32_t> bottom, top;
    for (int i = 0; i < segments; ++i) {
        double a = 2.0 * std::numbers::pi * i / segments;
        bottom.push_back(add_vertex(m, base_center + Vec3{radius * std::cos(a), radius * std::sin(a), 0.0}));
    }
    std::uint32_t bottom_c = add_vertex(m, base_center);
    std::uint32_t top_c = add_vertex(m, base_center + Vec3{0.0, 0.0, height});
    if (top_radius > 0.0) {
        for (int i = 0; i < segments; ++i) {
            double a = 2.0 * std::numbers::pi * i / segments;
            top.push_back(add_vertex(
                m, base_center + Vec3{top_radius * std::cos(a), top_radius * std::sin(a), height}));
        }
    }
    for (int i = 0; i < segments; ++i) {
        int j = (i + 1) % segments;
        m.triangles.push_back({bottom_c, bottom[j], bottom[i]});
        if (top_radius > 0.0) {
            m.triangles.push_back({bottom[i], bottom[j], top[j]});
            m.triangles.push_back({bottom[i], top[j], top[i]});
            m.triangles.push_back({top_c, top[i], top[j]});
        } else {
            m.triangles.push_back({bottom[i], bottom[j], top_c});
        }
    }
}

void add_torus(TriangleMesh& m, double major, double minor, int segments) {
    int rings = std::max(3, segments / 2);
    auto base = static_cast<std::uint32_t>(m.vertices.size());
    for (int i = 0; i < segments; ++i) {
        double a = 2.0 * std::numbers::pi * i / segments;
        for (int j = 0; j < rings; ++j) {
            double b = 2.0 * std::numbers::pi * j / rings;
            double r = major + minor * std::cos(b);
            m.vertices.push_back({r * std::cos(a), r * std::sin(a), minor * std::sin(b)});
        }
    }
    auto idx = [&](int i, int j) { return base + std::uint32_t((i % segments) * rings + (j % rings)); };
    for (int i = 0; i < segments; ++i) {
        for (int j = 0; j < rings; ++j) {
            m.triangles.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
            m.triangles.push_back({idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)});
        }
    }
}

}  // namespace

TriangleMesh make_primitive_mesh(PrimitiveKind kind, Rng& rng, int segments) {
    if (segments < 3) throw ConfigError("make_primitive_mesh: segments must be >= 3");
    TriangleMesh m;
    m.name = to_string(kind);
    switch (kind) {
        case PrimitiveKind::kBox: {
            Vec3 half{uniform(rng, 0.3, 1.0), uniform(rng, 0.3, 1.0), uniform(rng, 0.3, 1.0)};
            add_box(m, -half, half);
            break;
        }
        case PrimitiveKind::kCylinder: {
            double r = uniform(rng, 0.3, 1.0);
            add_lathe(m, {}, r, r, uniform(rng, 0.6, 2.0), segments);
            break;
        }
        case PrimitiveKind::kCone:
            add_lathe(m, {}, uniform(rng, 0.4, 1.0), 0.0, uniform(rng, 0.8, 2.0), segments);
            break;
        case PrimitiveKind::kTorus: {
            double major = uniform(rng, 0.6, 1.0);
            add_torus(m, major, major * uniform(rng, 0.2, 0.5), segments);
            break;
        }
        case PrimitiveKind::kComposite: {
            // A block with a column standing on it, offset from the centre.
            Vec3 half{uniform(rng, 0.5, 1.0), uniform(rng, 0.5, 1.0), uniform(rng, 0.1, 0.4)};
            add_box(m, {-half.x, -half.y, 0.0}, {half.x, half.y, 2.0 * half.z});
            double r = uniform(rng, 0.15, 0.4);
            Vec3 at{uniform(rng, -half.x + r, half.x - r), uniform(rng, -half.y + r, half.y - r), 2.0 * half.z};
            add_lathe(m, at, r, r, uniform(rng, 0.5, 1.5), segments);
            break;
        }
    }
    return mesh::prepare(m);
}

std::vector<TriangleMesh> make_primitive_set(std::size_t count, std::uint64_t seed) {
    static constexpr PrimitiveKind kinds[] = {PrimitiveKind::kBox, PrimitiveKind::kCylinder, PrimitiveKind::kTorus,
                                              PrimitiveKind::kCone, PrimitiveKind::kComposite};
    std::vector<TriangleMesh> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng(stream_seed(seed, i));
        PrimitiveKind kind = kinds[i % std::size(kinds)];
        TriangleMesh m = make_primitive_mesh(kind, rng, kind == PrimitiveKind::kTorus ? 24 : 16);
        m.name = to_string(kind) + "_" + std::to_string(i);
        out.push_back(std::move(m));
    }
    return out;
}

GrayImage intensity_augment(const GrayImage& shadow, double intensity) {
    if (!(intensity > 0.0)) throw ConfigError("intensity_augment: intensity must be > 0");
    GrayImage out = shadow;
    for (double& v : out.pixels) v = std::min(1.0, intensity * v);
    return out;
}

void to_json(nlohmann::json& j, const ManifestEntry& e) {
    j = nlohmann::json{{"id", e.id},
                       {"split", to_string(e.split)},
                       {"mesh", e.mesh},
                       {"seed", e.seed},
                       {"params", e.params},
                       {"rotation_deg", e.rotation_deg},
                       {"camera_distance", e.camera_distance},
                       {"grid", e.grid},
                       {"resolution", e.resolution},
                       {"files", {{"preview", e.preview}, {"mask", e.mask}, {"shadow", e.shadow}, {"meta", e.meta}}}};
}

void from_json(const nlohmann::json& j, ManifestEntry& e) {
    e.id = j.at("id").get<std::string>();
    e.split = split_from_string(j.at("split").get<std::string>());
    e.mesh = j.at("mesh").get<std::string>();
    e.seed = j.at("seed").get<std::uint64_t>();
    e.params = j.at("params").get<LightParams>();
    e.rotation_deg = j.at("rotation_deg").get<double>();
    e.camera_distance = j.at("camera_distance").get<double>();
    e.grid = j.at("grid").get<int>();
    e.resolution = j.at("resolution").get<int>();
    const auto& f = j.at("files");
    e.preview = f.at("preview").get<std::string>();
    e.mask = f.at("mask").get<std::string>();
    e.shadow = f.at("shadow").get<std::string>();
    e.meta = f.at("meta").get<std::string>();
}

std::string DatasetManifest::serialize() const {
    std::string out = nlohmann::json{{"format", "umbra-manifest"}, {"version", version}}.dump() + "\n";
    for (const auto& e : entries) out += nlohmann::json(e).dump() + "\n";
    return out;
}

DatasetManifest DatasetManifest::parse(const std::string& text) {
    DatasetManifest m;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
            if (!header) {
                if (j.value("format", "") != "umbra-manifest") throw ParseError(line_no, "missing manifest header");
                m.version = j.at("version").get<int>();
                if (m.version != kManifestVersion) {
                    throw ParseError(line_no, "unsupported manifest version " + std::to_string(m.version));
                }
                header = true;
                continue;
            }
            m.entries.push_back(j.get<ManifestEntry>());
        } catch (const nlohmann::json::exception& ex) {
            throw ParseError(line_no, ex.what());
        }
    }
    if (!header) throw ParseError(0, "empty manifest");
    return m;
}

void DatasetManifest::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << serialize();
}

DatasetManifest DatasetManifest::read(const std::filesystem::path& path, const std::filesystem::path& root) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    DatasetManifest m = parse(buffer.str());
    for (const auto& e : m.entries) {
        for (const auto* f : {&e.preview, &e.mask, &e.shadow, &e.meta}) {
            if (!std::filesystem::exists(root / *f)) throw IoError("manifest references missing file " + *f);
        }
    }
    return m;
}

std::string entry_id(Split split, std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06zu", index);
    return to_string(split) + "_" + buf;
}

void write_triplet(const std::filesystem::path& dir, const std::string& id, const render::RenderTriplet& t,
                   const nlohmann::json& extra) {
    std::filesystem::create_directories(dir);
    io::write_rgb_png(dir / (id + ".preview.png"), t.preview);
    io::write_mask_png(dir / (id + ".mask.png"), t.mask);
    io::write_shadow_png(dir / (id + ".shadow.png"), t.shadow);
    nlohmann::json meta = extra;
    meta["id"] = id;
    meta["mesh"] = t.mesh_name;
    meta["seed"] = t.seed;
    meta["grid"] = t.grid;
    meta["params"] = t.params;
    std::ofstream out(dir / (id + ".json"), std::ios::binary);
    if (!out) throw IoError("cannot write sidecar for " + id);
    out << meta.dump(2) << "\n";
}

namespace {

struct Job {
    std::size_t mesh_index = 0;
    LightParams params;
    double rotation = 0.0;
    double distance = kBenchmarkDistance;
    std::uint64_t render_seed = 0;
};

ForgeResult run_jobs(Split split, const std::vector<Job>& jobs, const std::vector<TriangleMesh>& meshes,
                     const RendererConfig& config, const std::filesystem::path& root) {
    std::string split_name = to_string(split);
    std::filesystem::path dir = root / split_name;
    std::filesystem::create_directories(dir);
    std::vector<std::optional<ManifestEntry>> entries(jobs.size());
    std::vector<std::string> errors(jobs.size());
    parallel_for(static_cast<int>(jobs.size()), resolve_workers(config.workers), [&](int i) {
        const Job& job = jobs[i];
        try {
            const TriangleMesh& src = meshes.at(job.mesh_index);
            render::Scene scene(mesh::settle(mesh::rotate_z(src, job.rotation)));
            scene::Camera cam = scene::dolly_camera(job.distance, config.resolution, config.resolution);
            auto triplet = render::render_triplet(scene, cam, job.params, config.grid, job.render_seed, 1);
            triplet.mesh_name = src.name;
            ManifestEntry e;
            e.id = entry_id(split, i);
            e.split = split;
            e.mesh = src.name;
            e.seed = job.render_seed;
            e.params = job.params;
            e.rotation_deg = job.rotation;
            e.camera_distance = job.distance;
            e.grid = config.grid;
            e.resolution = config.resolution;
            e.preview = split_name + "/" + e.id + ".preview.png";
            e.mask = split_name + "/" + e.id + ".mask.png";
            e.shadow = split_name + "/" + e.id + ".shadow.png";
            e.meta = split_name + "/" + e.id + ".json";
            write_triplet(dir, e.id, triplet,
                          {{"split", split_name}, {"rotation_deg", e.rotation_deg},
                           {"camera_distance", e.camera_distance}, {"resolution", e.resolution}});
            entries[i] = std::move(e);
        } catch (const std::exception& ex) {
            errors[i] = ex.what();
        }
    });
    ForgeResult result;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (entries[i]) {
            result.manifest.entries.push_back(std::move(*entries[i]));
        } else {
            result.failures.push_back({i, errors[i]});
        }
    }
    result.manifest.write(root / (split_name + ".jsonl"));
    return result;
}

}  // namespace

ForgeResult forge_dataset(const std::vector<TriangleMesh>& meshes, std::size_t count, std::uint64_t seed,
                          const RendererConfig& config, const std::filesystem::path& root) {
    if (count == 0) throw ConfigError("forge_dataset: count must be >= 1");
    if (meshes.empty()) throw ConfigError("forge_dataset: no meshes");
    std::vector<Job> jobs(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng(stream_seed(seed, i));
        Job& job = jobs[i];
        job.mesh_index = std::uniform_int_distribution<std::size_t>(0, meshes.size() - 1)(rng);
        job.rotation = uniform(rng, 0.0, 360.0);
        job.distance = uniform(rng, kDollyMin, kDollyMax);
        job.params = sample_training_params(rng);
        job.render_seed = rng();
    }
    return run_jobs(Split::kTrain, jobs, meshes, config, root);
}

ForgeResult forge_track(int track, const std::vector<TriangleMesh>& meshes, const RendererConfig& config,
                        const std::filesystem::path& root, std::uint64_t seed) {
    std::size_t n = std::min(meshes.size(), track_mesh_limit(track));
    auto items = generate_track(track, n);
    std::vector<Job> jobs;
    jobs.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        jobs.push_back({items[i].mesh_index, items[i].params, 0.0, kBenchmarkDistance, stream_seed(seed, i)});
    }
    Split split = track == 1 ? Split::kTrack1 : (track == 2 ? Split::kTrack2 : Split::kTrack3);
    return run_jobs(split, jobs, meshes, config, root);
}

}  // namespace umbra::forge
