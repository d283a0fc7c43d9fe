// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line driver. Exit codes: 0 success, 1 runtime failure, 2 usage error.
// Failures print one JSON record to stderr.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "umbra/cli/run_config.hpp"
#include "umbra/compositor.hpp"
#include "umbra/error.hpp"
#include "umbra/forge.hpp"
#include "umbra/image_io.hpp"
#include "umbra/lab/ablation.hpp"
#include "umbra/lab/data.hpp"
#include "umbra/lab/evaluation.hpp"
#include "umbra/lab/sampler.hpp"
#include "umbra/lab/trainer.hpp"
#include "umbra/mesh.hpp"
#include "umbra/metrics.hpp"
#include "umbra/render.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using umbra::ConfigError;
using umbra::cli::RunConfig;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

void emit_error(const std::string& kind, const std::string& command, const std::string& message) {
    std::cerr << json{{"error", {{"kind", kind}, {"command", command}, {"message", message}}}}.dump() << std::endl;
}

void print(const json& j) { std::cout << j.dump(2) << std::endl; }

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

fs::path require_out(const RunConfig& c) {
    require(!c.out.empty(), "--out is required");
    return c.out;
}

void require_file(const std::string& path, const std::string& flag) {
    require(!path.empty(), "--" + flag + " is required");
    require(fs::is_regular_file(path), "--" + flag + ": no such file " + path);
}

void require_dir(const std::string& path, const std::string& flag) {
    require(!path.empty(), "--" + flag + " is required");
    require(fs::is_directory(path), "--" + flag + ": no such directory " + path);
}

std::vector<fs::path> obj_files(const std::string& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".obj") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::size_t mesh_count(const RunConfig& c) {
    if (c.primitives > 0) return static_cast<std::size_t>(c.primitives);
    require_dir(c.meshes, "meshes");
    return obj_files(c.meshes).size();
}

std::vector<umbra::mesh::TriangleMesh> load_meshes(const RunConfig& c) {
    if (c.primitives > 0) return umbra::forge::make_primitive_set(static_cast<std::size_t>(c.primitives), c.seed);
    require_dir(c.meshes, "meshes");
    std::vector<umbra::mesh::TriangleMesh> meshes;
    for (const auto& f : obj_files(c.meshes)) {
        auto parsed = umbra::mesh::load_obj(f);
        meshes.push_back(umbra::mesh::prepare(parsed.mesh));
        meshes.back().name = f.stem().string();
    }
    require(!meshes.empty(), "--meshes: no .obj files in " + c.meshes);
    return meshes;
}

umbra::forge::RendererConfig renderer(const RunConfig& c) {
    require(c.resolution > 0, "--resolution must be positive");
    require(c.grid > 0, "--grid must be positive");
    return {c.resolution, c.grid, c.workers};
}

umbra::scene::LightParams light(const RunConfig& c) {
    umbra::scene::LightParams p;
    p.theta = c.theta;
    p.phi = c.phi;
    p.size = c.size;
    p.intensity = c.intensity;
    p.radius = umbra::forge::kLightRadius;
    return p;
}

int model_resolution(const RunConfig& c) { return c.model_resolution > 0 ? c.model_resolution : c.resolution; }

umbra::lab::DenoiserConfig denoiser(const RunConfig& c) {
    umbra::lab::DenoiserConfig d;
    d.resolution = model_resolution(c);
    d.base_channels = c.base_channels;
    d.embed_dim = c.embed_dim;
    d.objective = umbra::lab::objective_from_string(c.objective);
    d.conditioning = umbra::lab::conditioning_from_string(c.conditioning);
    d.frequency_form = umbra::lab::frequency_form_from_string(c.frequency_form);
    d.intensity = c.intensity_model;
    d.validate();
    return d;
}

umbra::lab::TrainConfig trainer_config(const RunConfig& c) {
    require(c.iterations >= 0, "--iterations must be >= 0");
    require(c.batch >= 1, "--batch must be >= 1");
    require(c.lr > 0.0, "--lr must be positive");
    umbra::lab::TrainConfig t;
    t.iterations = c.iterations;
    t.batch = c.batch;
    t.optimizer.lr = c.lr;
    t.optimizer.weight_decay = c.weight_decay;
    t.seed = c.seed;
    return t;
}

void require_steps(const RunConfig& c) {
    require(!c.steps.empty(), "--steps must not be empty");
    for (int k : c.steps) require(k >= 1, "--steps values must be >= 1");
}

umbra::forge::Split track_split(int track) {
    require(track >= 1 && track <= 3, "tracks are numbered 1..3, got " + std::to_string(track));
    return umbra::forge::split_from_string("track" + std::to_string(track));
}

void require_manifest(const fs::path& root, umbra::forge::Split split) {
    const fs::path m = root / (umbra::forge::to_string(split) + ".jsonl");
    require(fs::is_regular_file(m), "missing dataset manifest " + m.string());
}

std::array<umbra::lab::SampleSet, 3> load_tracks(const RunConfig& c, int resolution) {
    std::array<umbra::lab::SampleSet, 3> sets;
    for (int t = 1; t <= 3; ++t) sets[t - 1] = umbra::lab::load_split(c.root, track_split(t), resolution);
    return sets;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw umbra::IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

// Subcommands. Each returns the exit code; `dry` prints the plan and touches nothing.

int cmd_primitives(const RunConfig& c, bool dry) {
    require(c.primitives > 0, "--primitives must be positive");
    if (dry) {
        print({{"command", "primitives"}, {"plan", {{"count", c.primitives}, {"seed", c.seed}, {"out", c.out}}}});
        return 0;
    }
    const fs::path out = require_out(c);
    fs::create_directories(out);
    auto meshes = umbra::forge::make_primitive_set(static_cast<std::size_t>(c.primitives), c.seed);
    for (const auto& m : meshes) umbra::mesh::save_obj(out / (m.name + ".obj"), m);
    print({{"meshes", meshes.size()}, {"out", out.string()}});
    return 0;
}

int cmd_forge(const RunConfig& c, bool dry) {
    require(c.count > 0, "--count must be positive");
    auto rc = renderer(c);
    if (dry) {
        print({{"command", "forge"},
               {"plan",
                {{"entries", c.count},
                 {"meshes", mesh_count(c)},
                 {"resolution", rc.resolution},
                 {"grid", rc.grid},
                 {"theta", {umbra::forge::kThetaMin, umbra::forge::kThetaMax}},
                 {"phi", {umbra::forge::kPhiMin, umbra::forge::kPhiMax}},
                 {"size", {umbra::forge::kSizeMin, umbra::forge::kSizeMax}},
                 {"out", c.out}}}});
        return 0;
    }
    const fs::path out = require_out(c);
    auto meshes = load_meshes(c);
    auto result = umbra::forge::forge_dataset(meshes, static_cast<std::size_t>(c.count), c.seed, rc, out);
    json failures = json::array();
    for (const auto& f : result.failures) failures.push_back({{"index", f.index}, {"message", f.message}});
    print({{"entries", result.manifest.entries.size()}, {"failures", failures}, {"out", out.string()}});
    return result.failures.empty() ? 0 : kExitRuntime;
}

std::vector<umbra::mesh::TriangleMesh> track_meshes(const std::vector<umbra::mesh::TriangleMesh>& all, int track,
                                                    int per_track) {
    std::size_t n = std::min(all.size(), umbra::forge::track_mesh_limit(track));
    if (per_track > 0) n = std::min(n, static_cast<std::size_t>(per_track));
    return {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n)};
}

int cmd_tracks(const RunConfig& c, bool dry) {
    auto rc = renderer(c);
    require(!c.tracks.empty(), "--tracks must not be empty");
    for (int t : c.tracks) track_split(t);
    if (dry) {
        const std::size_t meshes = mesh_count(c);
        json plan = json::object();
        for (int t : c.tracks) {
            std::size_t n = std::min(meshes, umbra::forge::track_mesh_limit(t));
            if (c.track_meshes > 0) n = std::min(n, static_cast<std::size_t>(c.track_meshes));
            json grid = json::array();
            for (const auto& p : umbra::forge::track_grid(t)) grid.push_back(p);
            plan["track" + std::to_string(t)] = {{"meshes", n}, {"entries", n * grid.size()}, {"grid", grid}};
        }
        print({{"command", "tracks"}, {"plan", plan}, {"resolution", rc.resolution}, {"grid", rc.grid}});
        return 0;
    }
    const fs::path out = require_out(c);
    auto meshes = load_meshes(c);
    json summary = json::object();
    bool ok = true;
    for (int t : c.tracks) {
        auto result = umbra::forge::forge_track(t, track_meshes(meshes, t, c.track_meshes), rc, out, c.seed);
        summary["track" + std::to_string(t)] = {{"entries", result.manifest.entries.size()},
                                                {"failures", result.failures.size()}};
        ok = ok && result.failures.empty();
    }
    print(summary);
    return ok ? 0 : kExitRuntime;
}

int cmd_render(const RunConfig& c, bool dry) {
    auto rc = renderer(c);
    require_file(c.mesh, "mesh");
    auto p = light(c);
    if (dry) {
        print({{"command", "render"},
               {"plan", {{"mesh", c.mesh}, {"light", p}, {"resolution", rc.resolution}, {"grid", rc.grid},
                         {"distance", c.distance}, {"seed", c.seed}, {"out", c.out}}}});
        return 0;
    }
    const fs::path out = require_out(c);
    auto parsed = umbra::mesh::load_obj(c.mesh);
    umbra::render::Scene scene(umbra::mesh::prepare(parsed.mesh));
    auto cam = umbra::scene::dolly_camera(c.distance, rc.resolution, rc.resolution);
    auto triplet = umbra::render::render_triplet(scene, cam, p, rc.grid, c.seed, rc.workers);
    triplet.mesh_name = fs::path(c.mesh).stem().string();
    const std::string id = triplet.mesh_name;
    umbra::forge::write_triplet(out, id, triplet,
                                {{"camera_distance", c.distance}, {"resolution", rc.resolution},
                                 {"dropped_degenerate", parsed.dropped_degenerate}});
    print({{"id", id}, {"out", out.string()}});
    return 0;
}

int cmd_train(const RunConfig& c, bool dry) {
    auto dc = denoiser(c);
    auto tc = trainer_config(c);
    require_dir(c.root, "root");
    require_manifest(c.root, umbra::forge::Split::kTrain);
    if (!c.resume.empty()) require_file(c.resume, "resume");
    if (dry) {
        print({{"command", "train"}, {"plan", {{"model", dc}, {"train", tc}, {"root", c.root}, {"resume", c.resume},
                                               {"limit", c.limit}, {"out", c.out}}}});
        return 0;
    }
    const fs::path out = require_out(c);
    auto data = umbra::lab::load_split(c.root, umbra::forge::Split::kTrain, dc.resolution,
                                       static_cast<std::size_t>(std::max(0, c.limit)));
    umbra::lab::Trainer trainer(dc, tc, data);
    if (!c.resume.empty()) trainer.restore(c.resume);
    trainer.run(tc.iterations, [](std::int64_t step, double loss) {
        if (step % 50 == 0) std::cerr << "step " << step << " loss " << loss << "\n";
    });
    fs::create_directories(out);
    trainer.save(out / "trainer.ckpt");
    std::ofstream losses(out / "losses.csv");
    losses.precision(17);
    losses << "step,loss\n";
    for (std::size_t i = 0; i < trainer.state().losses.size(); ++i) losses << i + 1 << ',' << trainer.state().losses[i] << '\n';
    print({{"checkpoint", (out / "trainer.ckpt").string()},
           {"steps", trainer.state().step},
           {"final_loss", trainer.state().losses.empty() ? 0.0 : trainer.state().losses.back()}});
    return 0;
}

int cmd_sample(const RunConfig& c, bool dry) {
    require_file(c.checkpoint, "checkpoint");
    require_file(c.mask, "mask");
    require_file(c.preview, "preview");
    require_steps(c);
    auto p = light(c);
    if (dry) {
        print({{"command", "sample"}, {"plan", {{"checkpoint", c.checkpoint}, {"light", p}, {"steps", c.steps},
                                                {"seed", c.seed}, {"out", c.out}}}});
        return 0;
    }
    const fs::path out = require_out(c);
    auto model = umbra::lab::load_model(c.checkpoint);
    const int r = model.config().resolution;
    auto mask = umbra::io::read_mask_png(c.mask);
    auto preview = umbra::io::read_rgb_png(c.preview);
    umbra::require_same_shape(mask, preview, "sample");
    umbra::GrayImage mask_gray(mask.width, mask.height);
    auto object = umbra::luminance(preview);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        mask_gray.pixels[i] = mask.pixels[i] ? 1.0 : 0.0;
        if (!mask.pixels[i]) object.pixels[i] = 0.0;
    }
    mask_gray = umbra::resize_gray(mask_gray, r, r);
    object = umbra::resize_gray(object, r, r);
    fs::create_directories(out);
    json written = json::array();
    for (int k : c.steps) {
        auto map = umbra::lab::sample(model, mask_gray, object, p, k, c.seed);
        const fs::path file = out / ("sample_k" + std::to_string(k) + ".png");
        umbra::io::write_shadow_png(file, map);
        written.push_back(file.string());
    }
    print({{"written", written}});
    return 0;
}

int cmd_eval(const RunConfig& c, bool dry) {
    require_file(c.checkpoint, "checkpoint");
    require_dir(c.root, "root");
    for (int t = 1; t <= 3; ++t) require_manifest(c.root, track_split(t));
    require_steps(c);
    require(c.seeds >= 1, "--seeds must be >= 1");
    if (dry) {
        print({{"command", "eval"}, {"plan", {{"checkpoint", c.checkpoint}, {"root", c.root}, {"steps", c.steps},
                                              {"seeds", c.seeds}, {"metrics", umbra::metrics::kMetricNames},
                                              {"out", c.out}}}});
        return 0;
    }
    const fs::path out = require_out(c);
    auto model = umbra::lab::load_model(c.checkpoint);
    auto sets = load_tracks(c, model.config().resolution);
    auto obs = umbra::lab::evaluate_model(model, {&sets[0], &sets[1], &sets[2]}, c.steps, c.seeds,
                                          umbra::lab::to_string(model.config().objective), c.eval_batch, c.workers);
    auto report = umbra::metrics::aggregate(obs);
    fs::create_directories(out);
    std::ofstream(out / "eval.csv") << report.to_csv();
    write_json(out / "eval.json", report.to_json());
    print({{"rows", report.rows.size()}, {"out", out.string()}});
    return 0;
}

int cmd_composite(const RunConfig& c, bool dry) {
    require_file(c.object, "object");
    require_file(c.mask, "mask");
    require_file(c.shadow, "shadow");
    require_file(c.background, "background");
    require(c.intensity >= 0.0, "--intensity must be non-negative");
    if (dry) {
        print({{"command", "composite"}, {"plan", {{"intensity", c.intensity}, {"out", c.out}}}});
        return 0;
    }
    const fs::path out = require_out(c);
    umbra::compositor::CompositeInputs in;
    in.object = umbra::io::read_rgb_png(c.object);
    in.mask = umbra::io::read_mask_png(c.mask);
    in.shadow = umbra::io::read_shadow_png(c.shadow);
    in.background = umbra::io::read_rgb_png(c.background);
    in.intensity = c.intensity;
    auto image = umbra::compositor::composite(in);
    fs::create_directories(out);
    umbra::io::write_rgb_png(out / "composite.png", image);
    print({{"written", (out / "composite.png").string()}});
    return 0;
}

int cmd_sweep(const RunConfig& c, bool dry) {
    umbra::lab::AblationConfig ac;
    ac.model = denoiser(c);
    ac.train = trainer_config(c);
    ac.objectives.clear();
    for (const auto& name : c.objectives) ac.objectives.push_back(umbra::lab::objective_from_string(name));
    require(!ac.objectives.empty(), "--objectives must not be empty");
    require_steps(c);
    require(c.seeds >= 1, "--seeds must be >= 1");
    ac.steps = c.steps;
    ac.seeds = c.seeds;
    ac.curve_iterations = c.curve_iterations;
    ac.curve_seeds = c.curve_seeds;
    ac.margin = c.margin;
    ac.eval_batch = c.eval_batch;
    ac.workers = c.workers;
    require_dir(c.root, "root");
    require_manifest(c.root, umbra::forge::Split::kTrain);
    for (int t = 1; t <= 3; ++t) require_manifest(c.root, track_split(t));
    if (dry) {
        json objectives = json::array();
        for (auto o : ac.objectives) objectives.push_back(umbra::lab::to_string(o));
        print({{"command", "sweep"},
               {"plan",
                {{"model", ac.model},
                 {"train", ac.train},
                 {"objectives", objectives},
                 {"steps", ac.steps},
                 {"seeds", ac.seeds},
                 {"tracks", 3},
                 {"metrics", umbra::metrics::kMetricNames},
                 {"cells", ac.objectives.size() * ac.steps.size() * 3 * umbra::metrics::kMetricNames.size()},
                 {"curve_iterations", ac.curve_iterations},
                 {"out", c.out}}}});
        return 0;
    }
    const fs::path out = require_out(c);
    ac.checkpoint_dir = out / "checkpoints";
    auto train = umbra::lab::load_split(c.root, umbra::forge::Split::kTrain, ac.model.resolution,
                                        static_cast<std::size_t>(std::max(0, c.limit)));
    auto sets = load_tracks(c, ac.model.resolution);
    auto result = umbra::lab::run_ablation(ac, train, {&sets[0], &sets[1], &sets[2]},
                                           [](const std::string& msg) { std::cerr << msg << "\n"; });
    result.report.write(out);
    json trends = json::array();
    for (const auto& t : result.report.trends) {
        trends.push_back({{"name", t.name}, {"lhs", t.lhs}, {"rhs", t.rhs}, {"pass", t.pass}});
    }
    print({{"out", out.string()}, {"trends", trends}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"umbra: soft-shadow rendering, dataset forging and toy denoiser experiments"};
    app.require_subcommand(1);
    RunConfig config;
    std::string config_path;
    bool dry_run = false;

    using Handler = std::function<int(const RunConfig&, bool)>;
    struct Command {
        const char* name;
        const char* help;
        Handler handler;
        std::vector<std::string> options;
    };
    const std::vector<Command> commands{
        {"primitives", "write procedural primitive meshes as OBJ", cmd_primitives, {"primitives", "seed", "out"}},
        {"forge", "render a randomized training set", cmd_forge,
         {"meshes", "primitives", "count", "seed", "resolution", "grid", "workers", "out"}},
        {"tracks", "render the benchmark tracks", cmd_tracks,
         {"meshes", "primitives", "tracks", "track-meshes", "seed", "resolution", "grid", "workers", "out"}},
        {"render", "render one preview/mask/shadow triplet", cmd_render,
         {"mesh", "theta", "phi", "size", "intensity", "distance", "resolution", "grid", "seed", "workers", "out"}},
        {"train", "train a denoiser", cmd_train,
         {"root", "objective", "conditioning", "frequency-form", "intensity-model", "model-resolution", "resolution",
          "base-channels", "embed-dim", "iterations", "batch", "lr", "weight-decay", "seed", "limit", "resume",
          "out"}},
        {"sample", "predict a shadow map", cmd_sample,
         {"checkpoint", "mask", "preview", "theta", "phi", "size", "intensity", "steps", "seed", "out"}},
        {"eval", "score a model on the benchmark tracks", cmd_eval,
         {"checkpoint", "root", "steps", "seeds", "eval-batch", "workers", "out"}},
        {"composite", "composite an object and its shadow onto a background", cmd_composite,
         {"object", "mask", "shadow", "background", "intensity", "out"}},
        {"sweep", "train and evaluate every objective", cmd_sweep,
         {"root", "objectives", "steps", "seeds", "curve-iterations", "curve-seeds", "margin", "conditioning",
          "frequency-form", "model-resolution", "resolution", "base-channels", "embed-dim", "iterations", "batch",
          "lr", "weight-decay", "seed", "limit", "eval-batch", "workers", "out"}},
    };

    auto bindings = umbra::cli::fields(config);
    std::map<std::string, std::vector<CLI::Option*>> registered;
    std::map<CLI::App*, const Command*> by_app;
    for (const auto& cmd : commands) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
        sub->add_option("--config", config_path, "JSON config file (flags override its values)");
        sub->add_flag("--dry-run", dry_run, "print the resolved plan and exit without writing");
        for (const auto& name : cmd.options) {
            auto it = std::find_if(bindings.begin(), bindings.end(), [&](const auto& f) { return f.name == name; });
            if (it == bindings.end()) throw std::logic_error("unbound option " + name);
            CLI::Option* opt = std::visit(
                [&](auto* target) -> CLI::Option* {
                    using V = std::remove_pointer_t<decltype(target)>;
                    if constexpr (std::is_same_v<V, bool>) {
                        return sub->add_flag("--" + name, *target, it->help);
                    } else {
                        auto* o = sub->add_option("--" + name, *target, it->help);
                        if constexpr (!std::is_same_v<V, std::string> && !std::is_arithmetic_v<V>) o->delimiter(',');
                        return o;
                    }
                },
                it->ref);
            registered[name].push_back(opt);
        }
        by_app[sub] = &cmd;
    }

    std::string active = "umbra";
    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::CallForAllHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            emit_error("usage", active, e.what());
            return kExitUsage;
        }
        const Command* cmd = nullptr;
        for (auto* sub : app.get_subcommands()) cmd = by_app.at(sub);
        active = cmd->name;
        if (!config_path.empty()) {
            std::set<std::string> given;
            for (const auto& [name, opts] : registered) {
                for (auto* o : opts) {
                    if (o->count() > 0) given.insert(name);
                }
            }
            umbra::cli::apply_file(config, config_path, given);
        }
        return cmd->handler(config, dry_run);
    } catch (const ConfigError& e) {
        emit_error("usage", active, e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        emit_error("runtime", active, e.what());
        return kExitRuntime;
    }
}
