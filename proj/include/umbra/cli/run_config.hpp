// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace umbra::cli {

inline constexpr int kConfigVersion = 1;

/// Every setting any subcommand reads. JSON keys equal the long flag names.
struct RunConfig {
    std::uint64_t seed = 0;
    int workers = 0;

    // Paths. Outputs are written under `out` only.
    std::string meshes;
    std::string mesh;
    std::string root;
    std::string out;
    std::string checkpoint;
    std::string resume;
    std::string mask;
    std::string preview;
    std::string object;
    std::string shadow;
    std::string background;

    // Renderer and forge.
    int resolution = 64;
    int grid = 16;
    int count = 2000;
    int primitives = 0;
    std::vector<int> tracks{1, 2, 3};
    int track_meshes = 0;  // 0 keeps the standard per-track limits
    double theta = 30.0;
    double phi = 0.0;
    double size = 2.0;
    double intensity = 1.0;
    double distance = 6.0;

    // Model and trainer.
    std::string objective = "rf";
    std::string conditioning = "scalar";
    std::string frequency_form = "standard";
    bool intensity_model = false;
    int model_resolution = 0;  // 0 follows `resolution`
    int base_channels = 32;
    int embed_dim = 256;
    std::int64_t iterations = 5000;
    int batch = 16;
    double lr = 1e-4;
    double weight_decay = 0.0;
    int limit = 0;

    // Evaluation and sweeps.
    std::vector<std::string> objectives{"eps", "sample", "v", "rf"};
    std::vector<int> steps{1, 2, 4, 8, 20};
    int seeds = 10;
    std::vector<std::int64_t> curve_iterations;
    int curve_seeds = 1;
    double margin = 0.05;
    int eval_batch = 16;
};

using FieldRef = std::variant<std::uint64_t*, std::int64_t*, int*, double*, bool*, std::string*, std::vector<int>*,
                              std::vector<std::int64_t>*, std::vector<std::string>*>;

struct Field {
    std::string name;  // flag name without dashes, also the JSON key
    FieldRef ref;
    std::string help;
};

/// Bindings to every field of `config`.
std::vector<Field> fields(RunConfig& config);

/// Applies a config document. Requires "version" == kConfigVersion, rejects unknown keys
/// and ill-typed values with ConfigError. Keys listed in `skip` are left untouched.
void apply_json(RunConfig& config, const nlohmann::json& document, const std::set<std::string>& skip = {});

/// Reads and applies a config file (ConfigError when missing or malformed).
void apply_file(RunConfig& config, const std::filesystem::path& path, const std::set<std::string>& skip = {});

/// Full document including "version".
nlohmann::json to_json(const RunConfig& config);

}  // namespace umbra::cli
