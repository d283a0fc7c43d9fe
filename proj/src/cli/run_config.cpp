// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/cli/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "umbra/error.hpp"

namespace umbra::cli {

std::vector<Field> fields(RunConfig& c) {
    return {
        {"seed", &c.seed, "root random seed"},
        {"workers", &c.workers, "worker threads (0 = all; capped by UMBRA_THREADS)"},
        {"meshes", &c.meshes, "directory of .obj meshes"},
        {"mesh", &c.mesh, "single .obj mesh"},
        {"root", &c.root, "dataset root"},
        {"out", &c.out, "output directory or file"},
        {"checkpoint", &c.checkpoint, "model or trainer checkpoint"},
        {"resume", &c.resume, "trainer checkpoint to continue from"},
        {"mask", &c.mask, "object mask PNG"},
        {"preview", &c.preview, "object preview PNG"},
        {"object", &c.object, "object RGB PNG"},
        {"shadow", &c.shadow, "shadow map PNG"},
        {"background", &c.background, "background RGB PNG"},
        {"resolution", &c.resolution, "render resolution in pixels"},
        {"grid", &c.grid, "light samples per side (grid x grid per pixel)"},
        {"count", &c.count, "number of training images to forge"},
        {"primitives", &c.primitives, "generate this many primitive meshes instead of reading --meshes"},
        {"tracks", &c.tracks, "benchmark tracks to generate or evaluate"},
        {"track-meshes", &c.track_meshes, "meshes per track (0 = 50/15/15)"},
        {"theta", &c.theta, "light polar angle in degrees"},
        {"phi", &c.phi, "light azimuth in degrees"},
        {"size", &c.size, "light size"},
        {"intensity", &c.intensity, "shadow intensity"},
        {"distance", &c.distance, "camera distance"},
        {"objective", &c.objective, "eps | sample | v | rf"},
        {"conditioning", &c.conditioning, "scalar | blob | both"},
        {"frequency-form", &c.frequency_form, "standard | quadratic"},
        {"intensity-model", &c.intensity_model, "condition on intensity as a fourth scalar"},
        {"model-resolution", &c.model_resolution, "model resolution (0 = --resolution)"},
        {"base-channels", &c.base_channels, "U-Net base width"},
        {"embed-dim", &c.embed_dim, "sinusoidal embedding width per scalar"},
        {"iterations", &c.iterations, "training iterations"},
        {"batch", &c.batch, "training batch size"},
        {"lr", &c.lr, "AdamW learning rate"},
        {"weight-decay", &c.weight_decay, "AdamW decoupled weight decay"},
        {"limit", &c.limit, "use only the first N training entries (0 = all)"},
        {"objectives", &c.objectives, "objectives to sweep"},
        {"steps", &c.steps, "sampler step counts"},
        {"seeds", &c.seeds, "evaluation seeds"},
        {"curve-iterations", &c.curve_iterations, "intermediate iterations for the training curve"},
        {"curve-seeds", &c.curve_seeds, "seeds per training-curve point"},
        {"margin", &c.margin, "trend assertion margin"},
        {"eval-batch", &c.eval_batch, "maps per network call during evaluation"},
    };
}

void apply_json(RunConfig& config, const nlohmann::json& doc, const std::set<std::string>& skip) {
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    if (!doc.contains("version")) throw ConfigError("config: missing \"version\"");
    if (!doc["version"].is_number_integer() || doc["version"].get<int>() != kConfigVersion) {
        throw ConfigError("config: unsupported version " + doc["version"].dump() + " (expected " +
                          std::to_string(kConfigVersion) + ")");
    }
    auto bindings = fields(config);
    for (const auto& [key, value] : doc.items()) {
        if (key == "version") continue;
        auto it = std::find_if(bindings.begin(), bindings.end(), [&](const Field& f) { return f.name == key; });
        if (it == bindings.end()) throw ConfigError("config: unknown key \"" + key + "\"");
        if (skip.count(key)) continue;
        try {
            std::visit([&](auto* target) { *target = value.get<std::remove_pointer_t<decltype(target)>>(); }, it->ref);
        } catch (const nlohmann::json::exception&) {
            throw ConfigError("config: key \"" + key + "\" has the wrong type (" + value.dump() + ")");
        }
    }
}

void apply_file(RunConfig& config, const std::filesystem::path& path, const std::set<std::string>& skip) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read " + path.string());
    std::stringstream text;
    text << in.rdbuf();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.str());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: " + path.string() + " is not valid JSON: " + e.what());
    }
    apply_json(config, doc, skip);
}

nlohmann::json to_json(const RunConfig& config) {
    RunConfig copy = config;
    nlohmann::json doc = {{"version", kConfigVersion}};
    for (const auto& f : fields(copy)) {
        std::visit([&](auto* target) { doc[f.name] = *target; }, f.ref);
    }
    return doc;
}

}  // namespace umbra::cli
