// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance runner. Prints one PASS/FAIL line per criterion on stdout and
// progress on stderr. Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "umbra/autodiff/adamw.hpp"
#include "umbra/autodiff/ops.hpp"
#include "umbra/bvh.hpp"
#include "umbra/compositor.hpp"
#include "umbra/forge.hpp"
#include "umbra/lab/ablation.hpp"
#include "umbra/lab/diffusion.hpp"
#include "umbra/lab/evaluation.hpp"
#include "umbra/lab/trainer.hpp"
#include "umbra/lab/unet.hpp"
#include "umbra/metrics.hpp"
#include "umbra/render.hpp"

using namespace umbra;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kPenumbraTolerance = 0.15;
constexpr double kPenumbraSeconds = 30.0;
constexpr double kTrackSeconds = 1.0;
constexpr double kMetricTolerance = 1e-12;
constexpr double kAffineTolerance = 1e-9;
constexpr double kGradTolerance = 1e-4;
constexpr double kAdamTolerance = 1e-12;
constexpr double kRfTolerance = 1e-12;  // "exact" up to rounding in K Euler steps
constexpr double kEpsTolerance = 1e-6;
constexpr double kVTolerance = 1e-9;
constexpr double kConditioningRate = 0.8;
constexpr double kIntensityTolerance = 0.05;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Outcome {
    Outcome() = default;
    Outcome(int id_, std::string name_, bool pass_ = false, std::string detail_ = {})
        : id(id_), name(std::move(name_)), pass(pass_), detail(std::move(detail_)) {}

    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    json data = json::object();
};

std::string fmt(double v, int precision = 4) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

struct Profile {
    std::string name;
    int resolution = 32;
    int grid = 8;
    int track_grid = 16;
    std::size_t count = 2000;
    std::size_t train_meshes = 20;
    std::array<std::size_t, 3> track_meshes{3, 1, 1};
    std::size_t conditioning_meshes = 5;
    std::int64_t iterations = 500;
    int seeds = 3;
    double margin = 0.025;
    double sweep_budget_seconds = 15 * 60;
    int base_channels = 8;
    int batch = 16;
    double lr = 2e-3;

    static Profile smoke() { return Profile{.name = "smoke"}; }
    static Profile full() {
        Profile p;
        p.name = "full";
        p.resolution = 64;
        p.grid = 16;
        p.train_meshes = 100;
        p.track_meshes = {50, 15, 15};
        p.conditioning_meshes = 15;
        p.iterations = 5000;
        p.seeds = 10;
        p.margin = 0.05;
        p.sweep_budget_seconds = 4 * 3600;
        p.base_channels = 32;
        p.lr = ad::AdamWConfig{}.lr;
        return p;
    }
    json to_json() const {
        return {{"name", name},          {"resolution", resolution},
                {"grid", grid},          {"track_grid", track_grid},
                {"count", count},        {"train_meshes", train_meshes},
                {"track_meshes", track_meshes}, {"conditioning_meshes", conditioning_meshes},
                {"iterations", iterations}, {"seeds", seeds},
                {"margin", margin},      {"base_channels", base_channels},
                {"batch", batch},        {"lr", lr}};
    }
};

// Seeds for the procedural meshes. Track meshes never appear in training.
constexpr std::uint64_t kTrainMeshSeed = 1;
constexpr std::uint64_t kTrackMeshSeed = 99;
constexpr std::uint64_t kConditioningMeshSeed = 123;
constexpr std::uint64_t kForgeSeed = 7;

// 1. Plate penumbra width against the analytic ramp.
Outcome renderer_physics(int workers) {
    Outcome o(1, "renderer-physics");
    o.pass = true;
    double worst_err = 0.0, worst_time = 0.0;
    for (double s : {2.0, 4.0, 8.0}) {
        auto m = oracle::measure_penumbra(s, 256, 16, 11, workers);
        o.data["sizes"].push_back({{"size", s}, {"expected", m.expected}, {"measured", m.measured},
                                   {"relative_error", m.relative_error()}, {"seconds", m.seconds}});
        worst_err = std::max(worst_err, m.relative_error());
        worst_time = std::max(worst_time, m.seconds);
        o.pass = o.pass && m.relative_error() <= kPenumbraTolerance && m.seconds < kPenumbraSeconds;
    }
    o.detail = "max relative error " + fmt(worst_err) + " (tol " + fmt(kPenumbraTolerance) + "), slowest render " +
               fmt(worst_time, 3) + " s (limit " + fmt(kPenumbraSeconds) + ")";
    return o;
}

// 2. BVH against the all-triangle loop; worker-count invariance.
Outcome renderer_correctness() {
    Outcome o(2, "renderer-correctness");
    auto meshes = forge::make_primitive_set(5, 21);
    auto rays = oracle::random_rays(1000, 22);
    std::size_t mismatches = 0, hits = 0;
    for (const auto& m : meshes) {
        render::Bvh bvh(m);
        for (const auto& ray : rays) {
            render::Hit a = bvh.intersect(ray), b = oracle::nearest_hit(m, ray);
            mismatches += a.triangle != b.triangle || a.t != b.t;
            hits += b.triangle != render::Hit{}.triangle;
        }
    }
    bool identical = true;
    for (const auto& m : meshes) {
        render::Scene sc(m);
        auto cam = scene::dolly_camera(forge::kBenchmarkDistance, 64, 64);
        scene::LightParams p;
        p.theta = 30.0;
        p.phi = 40.0;
        p.size = 4.0;
        GrayImage one = render::render_shadow_map(sc, cam, p, 8, 5, 1);
        for (int w : {4, 8}) identical = identical && render::render_shadow_map(sc, cam, p, 8, 5, w) == one;
    }
    o.pass = mismatches == 0 && identical && hits > 0;
    o.data = {{"rays", rays.size() * meshes.size()}, {"hits", hits}, {"mismatches", mismatches},
              {"workers_identical", identical}};
    o.detail = std::to_string(mismatches) + " mismatches over " + std::to_string(rays.size() * meshes.size()) +
               " rays (" + std::to_string(hits) + " hits); shadow maps " +
               (identical ? "bit-identical" : "differ") + " across 1/4/8 workers";
    return o;
}

// 3. Track listing against the golden file.
Outcome track_fidelity() {
    Outcome o(3, "track-fidelity");
    auto start = std::chrono::steady_clock::now();
    std::array<std::size_t, 3> counts{};
    for (int t = 1; t <= 3; ++t) counts[t - 1] = forge::generate_track(t, forge::track_mesh_limit(t)).size();
    const std::string listing = oracle::track_listing(
        {forge::track_mesh_limit(1), forge::track_mesh_limit(2), forge::track_mesh_limit(3)});
    const std::string golden = oracle::read_text(fs::path(UMBRA_TEST_DATA_DIR) / "golden" / "tracks.golden");
    const double elapsed = seconds_since(start);
    const bool counts_ok = counts == std::array<std::size_t, 3>{150, 270, 135};
    o.pass = counts_ok && listing == golden && elapsed < kTrackSeconds;
    o.data = {{"counts", counts}, {"golden_match", listing == golden}, {"seconds", elapsed}};
    o.detail = "entries " + std::to_string(counts[0]) + "/" + std::to_string(counts[1]) + "/" +
               std::to_string(counts[2]) + ", golden " + (listing == golden ? "match" : "MISMATCH") + ", " +
               fmt(elapsed, 3) + " s";
    return o;
}

// 4. Metrics against scalar-loop references and closed forms.
Outcome metrics_oracle() {
    Outcome o(4, "metrics-oracle");
    Rng rng(31);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        GrayImage p = oracle::random_gray(16, 16, rng), g = oracle::random_gray(16, 16, rng);
        worst = std::max({worst, std::abs(metrics::soft_iou(p, g) - oracle::naive_soft_iou(p, g)),
                          std::abs(metrics::rmse(p, g) - oracle::naive_rmse(p, g)),
                          std::abs(metrics::scaled_rmse(p, g) - oracle::naive_scaled_rmse(p, g)),
                          std::abs(metrics::zncc(p, g) - oracle::naive_zncc(p, g))});
    }
    auto filled = [](double v) {
        GrayImage g(16, 16);
        std::fill(g.pixels.begin(), g.pixels.end(), v);
        return g;
    };
    GrayImage p = oracle::random_gray(16, 16, rng);
    GrayImage disjoint_a(4, 1), disjoint_b(4, 1);
    disjoint_a.pixels = {1, 0.5, 0, 0};
    disjoint_b.pixels = {0, 0, 0.3, 1};
    GrayImage twice = p, affine = p, anti = p;
    for (double& v : twice.pixels) v *= 2.0;
    for (double& v : affine.pixels) v = 3.0 * v + 0.25;
    for (double& v : anti.pixels) v = 1.0 - v;
    std::vector<std::pair<std::string, bool>> cases{
        {"iou self", metrics::soft_iou(p, p) == 1.0},
        {"iou disjoint", metrics::soft_iou(disjoint_a, disjoint_b) == 0.0},
        {"iou half", metrics::soft_iou(filled(0.5), filled(1.0)) == 0.5},
        {"rmse self", metrics::rmse(p, p) == 0.0},
        {"rmse zero vs one", metrics::rmse(filled(0.0), filled(1.0)) == 1.0},
        {"s-rmse scale", metrics::scaled_rmse(twice, p) == 0.0},
        {"s-rmse zero prediction", metrics::scaled_rmse(filled(0.0), p) == metrics::rmse(filled(0.0), p)},
        {"zncc self", std::abs(metrics::zncc(p, p) - 1.0) <= kMetricTolerance},
        {"zncc affine", std::abs(metrics::zncc(p, affine) - 1.0) <= kAffineTolerance},
        {"zncc anti", std::abs(metrics::zncc(p, anti) + 1.0) <= kAffineTolerance},
    };
    std::vector<std::string> failed;
    for (const auto& [name, ok] : cases) {
        if (!ok) failed.push_back(name);
    }
    o.pass = worst <= kMetricTolerance && failed.empty();
    o.data = {{"max_abs_error", worst}, {"failed_cases", failed}};
    o.detail = "max |impl - reference| " + fmt(worst) + " over 100 pairs (tol " + fmt(kMetricTolerance) + "), " +
               std::to_string(cases.size() - failed.size()) + "/" + std::to_string(cases.size()) +
               " closed-form cases";
    return o;
}

// 5. Finite-difference gradients for every operator and the assembled network; AdamW step.
Outcome autodiff_checks() {
    using T = ad::Tensor<double>;
    using oracle::gradient_error;
    using oracle::random_tensor;
    using oracle::weighted_sum;
    Outcome o(5, "autodiff");
    Rng rng(41);
    std::vector<std::pair<std::string, double>> errors;
    {
        T a = random_tensor({2, 3, 4}, rng), b = random_tensor({2, 3, 4}, rng);
        errors.push_back({"add", gradient_error([&] { return weighted_sum(ad::add(a, b), 1); }, {a, b})});
        errors.push_back({"mul", gradient_error([&] { return weighted_sum(ad::mul(a, b), 2); }, {a, b})});
        errors.push_back({"scale", gradient_error([&] { return weighted_sum(ad::scale(a, -1.7), 3); }, {a})});
        errors.push_back({"silu", gradient_error([&] { return weighted_sum(ad::silu(a), 4); }, {a})});
        errors.push_back({"sum", gradient_error([&] { return ad::sum(ad::mul(a, a)); }, {a})});
        T target = random_tensor({2, 3, 4}, rng, false);
        errors.push_back({"mse", gradient_error([&] { return ad::mse_loss(a, target); }, {a})});
    }
    {
        T x = random_tensor({2, 3, 4, 5}, rng), bias = random_tensor({2, 3}, rng);
        errors.push_back(
            {"add_per_channel", gradient_error([&] { return weighted_sum(ad::add_per_channel(x, bias), 5); }, {x, bias})});
    }
    {
        T x = random_tensor({3, 5}, rng), w = random_tensor({4, 5}, rng), b = random_tensor({4}, rng);
        errors.push_back({"linear", gradient_error([&] { return weighted_sum(ad::linear(x, w, b), 6); }, {x, w, b})});
    }
    for (auto [k, stride, size] : {std::tuple{3, 1, 5}, std::tuple{3, 2, 6}, std::tuple{1, 1, 4}}) {
        T x = random_tensor({2, 3, size, size}, rng), w = random_tensor({4, 3, k, k}, rng, true, 0.5),
          b = random_tensor({4}, rng);
        errors.push_back({"conv2d k" + std::to_string(k) + " s" + std::to_string(stride),
                          gradient_error([&] { return weighted_sum(ad::conv2d(x, w, b, stride), 7); }, {x, w, b})});
    }
    {
        T x = random_tensor({2, 2, 3, 4}, rng);
        errors.push_back({"upsample2x", gradient_error([&] { return weighted_sum(ad::upsample2x(x), 8); }, {x})});
    }
    {
        T x = random_tensor({2, 4, 3, 3}, rng, true, 2.0), g = random_tensor({4}, rng), b = random_tensor({4}, rng);
        errors.push_back(
            {"group_norm", gradient_error([&] { return weighted_sum(ad::group_norm(x, g, b, 2), 9); }, {x, g, b})});
    }
    {
        T a = random_tensor({2, 1, 3, 3}, rng), b = random_tensor({2, 3, 3, 3}, rng);
        errors.push_back({"concat", gradient_error([&] { return weighted_sum(ad::concat<double>({a, b}), 10); }, {a, b})});
    }
    {
        lab::DenoiserConfig c;
        c.resolution = 4;
        c.base_channels = 4;
        c.channel_multipliers = {1, 2};
        c.blocks_per_level = 1;
        c.groups = 2;
        c.embed_dim = 4;
        c.conditioning = lab::Conditioning::kBoth;
        lab::UNet<double> net(c, 2);
        // Perturb the zero-initialised output layers so upstream gradients are visible.
        std::normal_distribution<double> n(0.0, 0.3);
        std::vector<T> leaves;
        for (auto& e : net.params().entries()) {
            for (double& v : e.tensor.data()) v += n(rng);
            leaves.push_back(e.tensor);
        }
        T x = random_tensor({2, c.input_channels(), 4, 4}, rng);
        leaves.push_back(x);
        std::vector<double> t{0.3, 0.8};
        std::vector<double> cond(2 * c.condition_width());
        for (double& v : cond) v = n(rng);
        errors.push_back({"unet", gradient_error([&] { return weighted_sum(net.forward(x, t, cond), 11); }, leaves)});
    }
    double worst = 0.0;
    std::string worst_name;
    for (const auto& [name, err] : errors) {
        o.data["gradients"][name] = err;
        if (err >= worst) worst = err, worst_name = name;
    }
    // AdamW first step: the bias-corrected moments equal g and g².
    double adam_err = 0.0;
    for (double g : {0.3, -2.5, 1e-3}) {
        ad::AdamWConfig c;
        c.lr = 1e-2;
        c.weight_decay = 0.01;
        std::vector<double> p{1.25}, grad{g}, m{0.0}, v{0.0};
        ad::adamw_update<double>(p, grad, m, v, 1, c);
        const double expected = 1.25 * (1.0 - c.lr * c.weight_decay) - c.lr * g / (std::abs(g) + c.eps);
        adam_err = std::max(adam_err, std::abs(p[0] - expected));
    }
    o.data["adamw_abs_error"] = adam_err;
    o.pass = worst < kGradTolerance && adam_err <= kAdamTolerance;
    o.detail = "worst gradient error " + fmt(worst) + " (" + worst_name + ", tol " + fmt(kGradTolerance) + ") over " +
               std::to_string(errors.size()) + " checks; AdamW step error " + fmt(adam_err);
    return o;
}

std::vector<double> normal_vector(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> d;
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// 6. Plug-in oracle models through the samplers; v identities.
Outcome sampler_identities() {
    using namespace umbra::lab;
    Outcome o(6, "sampler-identities");
    Schedule s = Schedule::cosine();
    auto x0 = normal_vector(256, 51), noise = normal_vector(256, 52);
    std::vector<double> field(x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) field[i] = noise[i] - x0[i];
    ModelFn rf = [&](std::span<const double>, double) { return field; };
    double rf_err = 0.0;
    for (int k : {1, 2, 3, 4, 8, 20, 64}) {
        rf_err = std::max(rf_err, max_abs_diff(integrate(rf, noise, k, Objective::kRectifiedFlow, s), x0));
    }
    ModelFn eps = [&](std::span<const double> x, double t) {
        std::vector<double> e(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) e[i] = (x[i] - s.alpha(t) * x0[i]) / s.sigma(t);
        return e;
    };
    const double eps_err = max_abs_diff(integrate(eps, noise, 1, Objective::kEps, s), x0);
    double v_err = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        auto a = normal_vector(256, 60 + trial), e = normal_vector(256, 100 + trial);
        const double t = 0.05 * trial;
        auto xt = forward_diffuse(a, e, t, s);
        auto r = reconstruct(Objective::kV, loss_target(Objective::kV, a, e, t, s), xt, t, s);
        v_err = std::max({v_err, max_abs_diff(r.x0, a), max_abs_diff(r.eps, e)});
    }
    o.pass = rf_err <= kRfTolerance && eps_err <= kEpsTolerance && v_err <= kVTolerance;
    o.data = {{"rf_max_error", rf_err}, {"eps_k1_error", eps_err}, {"v_max_error", v_err}};
    o.detail = "rf recovery " + fmt(rf_err) + " (K in 1..64), eps K=1 " + fmt(eps_err) + ", v identities " +
               fmt(v_err);
    return o;
}

// Shared state for the trained criteria.
struct TrainedRun {
    lab::SampleSet train;
    std::array<lab::SampleSet, 3> tracks;
    lab::AblationResult ablation;
    lab::DenoiserConfig model;
    lab::TrainConfig train_config;
    double forge_seconds = 0.0;
    double sweep_seconds = 0.0;
};

forge::RendererConfig renderer(int resolution, int grid, int workers) {
    forge::RendererConfig rc;
    rc.resolution = resolution;
    rc.grid = grid;
    rc.workers = workers;
    return rc;
}

std::vector<mesh::TriangleMesh> first(const std::vector<mesh::TriangleMesh>& all, std::size_t n) {
    return {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(std::min(n, all.size()))};
}

TrainedRun run_sweep(const Profile& profile, const fs::path& root, int workers) {
    TrainedRun run;
    auto start = std::chrono::steady_clock::now();
    std::cerr << "forging " << profile.count << " training images at " << profile.resolution << "^2\n";
    auto train_meshes = forge::make_primitive_set(profile.train_meshes, kTrainMeshSeed);
    auto forged = forge::forge_dataset(train_meshes, profile.count, kForgeSeed,
                                       renderer(profile.resolution, profile.grid, workers), root);
    if (!forged.failures.empty()) throw Error("forge failed: " + forged.failures.front().message);
    auto track_meshes = forge::make_primitive_set(
        *std::max_element(profile.track_meshes.begin(), profile.track_meshes.end()), kTrackMeshSeed);
    for (int t = 1; t <= 3; ++t) {
        auto r = forge::forge_track(t, first(track_meshes, profile.track_meshes[t - 1]),
                                    renderer(profile.resolution, profile.track_grid, workers), root, 3);
        if (!r.failures.empty()) throw Error("track forge failed: " + r.failures.front().message);
    }
    run.train = lab::load_split(root, forge::Split::kTrain, profile.resolution);
    const std::array<forge::Split, 3> splits{forge::Split::kTrack1, forge::Split::kTrack2, forge::Split::kTrack3};
    for (int t = 0; t < 3; ++t) run.tracks[t] = lab::load_split(root, splits[t], profile.resolution);
    run.forge_seconds = seconds_since(start);
    std::cerr << "forged in " << fmt(run.forge_seconds, 3) << " s\n";

    lab::AblationConfig ac;
    ac.model.resolution = profile.resolution;
    ac.model.base_channels = profile.base_channels;
    ac.train.iterations = profile.iterations;
    ac.train.batch = profile.batch;
    ac.train.optimizer.lr = profile.lr;
    ac.train.seed = 0;
    ac.seeds = profile.seeds;
    ac.margin = profile.margin;
    ac.workers = workers;
    run.ablation = lab::run_ablation(ac, run.train, {&run.tracks[0], &run.tracks[1], &run.tracks[2]},
                                     [](const std::string& msg) { std::cerr << msg << "\n"; });
    run.model = ac.model;
    run.train_config = ac.train;
    run.sweep_seconds = seconds_since(start);
    return run;
}

// 7. Objective ablation trends.
Outcome ablation_trend(const Profile& profile, const TrainedRun& run) {
    Outcome o(7, "ablation-trend");
    const auto& trends = run.ablation.report.trends;
    bool all = true;
    std::vector<std::string> parts;
    for (const auto& t : trends) {
        all = all && t.pass;
        parts.push_back(t.name + " " + fmt(t.lhs) + " vs " + fmt(t.rhs) + (t.pass ? " ok" : " FAIL"));
        o.data["trends"].push_back({{"name", t.name}, {"lhs", t.lhs}, {"rhs", t.rhs}, {"pass", t.pass}});
    }
    for (auto obj : {lab::Objective::kEps, lab::Objective::kSample, lab::Objective::kV, lab::Objective::kRectifiedFlow}) {
        for (int k : {1, 20}) {
            o.data["iou"][lab::to_string(obj)][std::to_string(k)] = run.ablation.report.cell(obj, k, "iou");
        }
    }
    const bool in_budget = run.sweep_seconds <= profile.sweep_budget_seconds;
    o.pass = all && in_budget && trends.size() == 2;
    o.data["sweep_seconds"] = run.sweep_seconds;
    o.data["margin"] = profile.margin;
    std::string joined;
    for (const auto& p : parts) joined += (joined.empty() ? "" : "; ") + p;
    o.detail = joined + "; margin " + fmt(profile.margin) + "; " + fmt(run.sweep_seconds, 4) + " s (limit " +
               fmt(profile.sweep_budget_seconds, 5) + ")";
    return o;
}

const lab::UNet<float>& rf_model(const TrainedRun& run) {
    for (const auto& [obj, model] : run.ablation.models) {
        if (obj == lab::Objective::kRectifiedFlow) return model;
    }
    throw Error("no rectified-flow model in the sweep");
}

// 8. Softness monotonicity and azimuth reflection on held-out track-2 objects.
Outcome conditioning_control(const Profile& profile, const TrainedRun& run, const fs::path& root, int workers) {
    Outcome o(8, "conditioning-control");
    const fs::path dir = root / "conditioning";
    auto meshes = forge::make_primitive_set(profile.conditioning_meshes, kConditioningMeshSeed);
    auto r = forge::forge_track(2, meshes, renderer(profile.resolution, profile.track_grid, workers), dir, 5);
    if (!r.failures.empty()) throw Error("conditioning track failed: " + r.failures.front().message);
    auto set = lab::load_split(dir, forge::Split::kTrack2, profile.resolution);
    auto report = lab::check_conditioning(rf_model(run), set, 1, 17);
    o.pass = report.pass_rate >= kConditioningRate;
    o.data = report.to_json();
    o.detail = "pass rate " + fmt(report.pass_rate) + " over " + std::to_string(report.objects.size()) +
               " objects (need " + fmt(kConditioningRate) + "); softness " + fmt(report.softness_rate) +
               ", reflection " + fmt(report.reflection_rate) + ", ground-truth reflection " +
               fmt(report.truth_reflection_rate);
    return o;
}

// 9. Compositing paths agree exactly; intensity-conditioned model tracks the scaled base model.
Outcome intensity_paths(const TrainedRun& run) {
    Outcome o(9, "intensity-paths");
    bool exact = true;
    std::size_t compared = 0;
    Rng rng(71);
    for (const auto& set : run.tracks) {
        for (const auto& s : set.items) {
            compositor::CompositeInputs in;
            in.object = RgbImage(s.shadow.width, s.shadow.height);
            in.background = RgbImage(s.shadow.width, s.shadow.height);
            for (std::size_t i = 0; i < s.object.size(); ++i) in.object.pixels[i] = {s.object.pixels[i], 0.4, 0.7};
            for (auto& px : in.background.pixels) px = {uniform01(rng), uniform01(rng), uniform01(rng)};
            in.mask = MaskImage(s.mask.width, s.mask.height);
            for (std::size_t i = 0; i < s.mask.size(); ++i) in.mask.pixels[i] = s.mask.pixels[i] > 0.5;
            for (double level : {0.1, 0.5, 1.0, 1.5, 1.9}) {
                in.shadow = s.shadow;
                in.intensity = level;
                RgbImage direct = compositor::composite(in);
                in.shadow = forge::intensity_augment(s.shadow, level);
                in.intensity = 1.0;
                exact = exact && compositor::composite(in) == direct;
                ++compared;
            }
        }
    }
    std::cerr << "training the intensity-conditioned model\n";
    lab::DenoiserConfig ic = run.model;
    ic.objective = lab::Objective::kRectifiedFlow;
    ic.intensity = true;
    lab::Trainer trainer(ic, run.train_config, run.train);
    trainer.run(run.train_config.iterations);
    lab::SampleSet eval;
    eval.resolution = run.train.resolution;
    for (const auto& set : run.tracks) eval.items.insert(eval.items.end(), set.items.begin(), set.items.end());
    auto report = lab::check_intensity(rf_model(run), trainer.model(), eval, {0.5, 1.0}, 1, 19);
    o.pass = exact && report.worst < kIntensityTolerance;
    o.data = {{"composites_compared", compared}, {"composite_exact", exact}, {"intensity", report.to_json()}};
    o.detail = std::string("composite paths ") + (exact ? "identical" : "DIFFER") + " on " +
               std::to_string(compared) + " cases; s-rmse at I=0.5 " + fmt(report.mean_s_rmse[0]) + ", I=1.0 " +
               fmt(report.mean_s_rmse[1]) + " (tol " + fmt(kIntensityTolerance) + ")";
    return o;
}

void print(const Outcome& o) {
    std::cout << "criterion " << o.id << " " << o.name << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail
              << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria runner"};
    std::string profile_name = "smoke";
    std::string report_path;
    std::string work_dir;
    std::vector<int> only;
    int workers = 0;
    app.add_option("--profile", profile_name, "smoke or full")->check(CLI::IsMember({"smoke", "full"}));
    app.add_option("--report", report_path, "write a JSON report here");
    app.add_option("--work-dir", work_dir, "keep forged data here instead of a temporary directory");
    app.add_option("--only", only, "criteria to run")->delimiter(',');
    app.add_option("--workers", workers, "render workers (0 = hardware concurrency)");
    CLI11_PARSE(app, argc, argv);

    const Profile profile = profile_name == "full" ? Profile::full() : Profile::smoke();
    const std::set<int> selected = only.empty() ? std::set<int>{1, 2, 3, 4, 5, 6, 7, 8, 9}
                                                : std::set<int>(only.begin(), only.end());
    std::vector<Outcome> outcomes;
    auto record = [&](int id, const std::string& name, const std::function<Outcome()>& fn) {
        if (!selected.count(id)) return;
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = Outcome(id, name, false, std::string("error: ") + e.what());
        }
        o.data["seconds"] = seconds_since(start);
        print(o);
        outcomes.push_back(std::move(o));
    };

    record(1, "renderer-physics", [&] { return renderer_physics(workers); });
    record(2, "renderer-correctness", renderer_correctness);
    record(3, "track-fidelity", track_fidelity);
    record(4, "metrics-oracle", metrics_oracle);
    record(5, "autodiff", autodiff_checks);
    record(6, "sampler-identities", sampler_identities);

    if (selected.count(7) || selected.count(8) || selected.count(9)) {
        std::optional<oracle::TempDir> temp;
        fs::path root;
        if (work_dir.empty()) {
            temp.emplace("acceptance");
            root = temp->path();
        } else {
            root = work_dir;
            fs::create_directories(root);
        }
        std::optional<TrainedRun> run;
        std::string failure;
        try {
            run = run_sweep(profile, root, workers);
        } catch (const std::exception& e) {
            failure = std::string("error: ") + e.what();
        }
        auto trained = [&](int id, const std::string& name, const std::function<Outcome()>& fn) {
            if (run) {
                record(id, name, fn);
            } else if (selected.count(id)) {
                Outcome o(id, name, false, failure);
                print(o);
                outcomes.push_back(o);
            }
        };
        trained(7, "ablation-trend", [&] { return ablation_trend(profile, *run); });
        trained(8, "conditioning-control", [&] { return conditioning_control(profile, *run, root, workers); });
        trained(9, "intensity-paths", [&] { return intensity_paths(*run); });
        if (run && !work_dir.empty()) run->ablation.report.write(root / "ablation");
    }

    const auto passed = std::count_if(outcomes.begin(), outcomes.end(), [](const Outcome& o) { return o.pass; });
    std::cout << "summary: " << passed << "/" << outcomes.size() << " criteria pass (profile " << profile.name << ")"
              << std::endl;
    if (!report_path.empty()) {
        json doc = {{"profile", profile.to_json()}, {"criteria", json::array()}};
        for (const auto& o : outcomes) {
            doc["criteria"].push_back(
                {{"id", o.id}, {"name", o.name}, {"pass", o.pass}, {"detail", o.detail}, {"data", o.data}});
        }
        std::ofstream(report_path) << doc.dump(2) << "\n";
    }
    return passed == static_cast<std::ptrdiff_t>(outcomes.size()) ? 0 : 1;
}
