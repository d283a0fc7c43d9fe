// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/lab/trainer.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "umbra/autodiff/checkpoint.hpp"
#include "umbra/autodiff/ops.hpp"
#include "umbra/error.hpp"
#include "umbra/forge.hpp"

namespace umbra::lab {

void to_json(nlohmann::json& j, const TrainConfig& c) {
    j = nlohmann::json{{"iterations", c.iterations},
                       {"batch", c.batch},
                       {"lr", c.optimizer.lr},
                       {"beta1", c.optimizer.beta1},
                       {"beta2", c.optimizer.beta2},
                       {"eps", c.optimizer.eps},
                       {"weight_decay", c.optimizer.weight_decay},
                       {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
    c.iterations = j.at("iterations").get<std::int64_t>();
    c.batch = j.at("batch").get<int>();
    c.optimizer.lr = j.at("lr").get<double>();
    c.optimizer.beta1 = j.at("beta1").get<double>();
    c.optimizer.beta2 = j.at("beta2").get<double>();
    c.optimizer.eps = j.at("eps").get<double>();
    c.optimizer.weight_decay = j.at("weight_decay").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
}

ad::Tensor<float> assemble_input(const DenoiserConfig& config, std::span<const double> x_t,
                                 std::span<const Sample* const> samples, std::span<const scene::LightParams> params) {
    const int n = static_cast<int>(samples.size());
    const int r = config.resolution;
    const std::size_t plane = std::size_t(r) * r;
    const int c = config.input_channels();
    if (x_t.size() != n * plane || params.size() != samples.size()) {
        throw ShapeError("assemble_input: batch sizes disagree");
    }
    std::vector<float> data(std::size_t(n) * c * plane);
    for (int i = 0; i < n; ++i) {
        const Sample& s = *samples[i];
        if (!s.shadow.same_shape(r, r)) throw ShapeError("assemble_input: sample resolution differs from model");
        float* dst = data.data() + std::size_t(i) * c * plane;
        for (std::size_t p = 0; p < plane; ++p) {
            dst[p] = float(x_t[i * plane + p]);
            dst[plane + p] = float(to_model_space(s.mask.pixels[p]));
            dst[2 * plane + p] = float(to_model_space(s.object.pixels[p]));
        }
        if (config.uses_blob()) {
            GrayImage blob = blob_for(params[i], r);
            for (std::size_t p = 0; p < plane; ++p) dst[3 * plane + p] = float(to_model_space(blob.pixels[p]));
        }
    }
    return ad::Tensor<float>::from({n, c, r, r}, std::move(data));
}

std::vector<float> condition_values(const DenoiserConfig& config, std::span<const scene::LightParams> params) {
    std::vector<float> out;
    if (!config.uses_scalars()) return out;
    out.reserve(params.size() * config.condition_width());
    for (const auto& p : params) {
        for (double v : build_condition_vector(p, config.embed_dim, config.intensity, config.frequency_form)) {
            out.push_back(float(v));
        }
    }
    return out;
}

Trainer::Trainer(const DenoiserConfig& config, const TrainConfig& train, const SampleSet& data)
    : data_(&data), model_(config, train.seed), rng_(stream_seed(train.seed, 1)) {
    if (data.items.empty()) throw ConfigError("trainer: empty training set");
    if (data.resolution != config.resolution) {
        throw ConfigError("trainer: data resolution " + std::to_string(data.resolution) + " differs from model " +
                          std::to_string(config.resolution));
    }
    if (train.batch < 1) throw ConfigError("trainer: batch must be >= 1");
    state_.config = config;
    state_.train = train;
}

double Trainer::step() {
    const DenoiserConfig& cfg = state_.config;
    const int n = state_.train.batch;
    const std::size_t plane = std::size_t(cfg.resolution) * cfg.resolution;
    std::uniform_int_distribution<std::size_t> pick(0, data_->items.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> intensity(kIntensityMin, kIntensityMax);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<const Sample*> samples(n);
    std::vector<scene::LightParams> params(n);
    std::vector<float> times(n);
    std::vector<double> x_t(n * plane), target(n * plane);
    for (int i = 0; i < n; ++i) {
        const Sample& s = data_->items[pick(rng_)];
        samples[i] = &s;
        params[i] = s.params;
        GrayImage shadow = s.shadow;
        if (cfg.intensity) {
            params[i].intensity = intensity(rng_);
            shadow = forge::intensity_augment(shadow, params[i].intensity);
        }
        // Round t through float so the network and the targets see the same value.
        const double t = double(float(unit(rng_)));
        times[i] = float(t);
        std::vector<double> x0(plane), eps(plane);
        for (std::size_t p = 0; p < plane; ++p) x0[p] = to_model_space(shadow.pixels[p]);
        for (double& e : eps) e = gauss(rng_);
        auto xt = cfg.objective == Objective::kRectifiedFlow ? rf_interpolate(x0, eps, t)
                                                              : forward_diffuse(x0, eps, t, schedule_);
        auto tgt = loss_target(cfg.objective, x0, eps, t, schedule_);
        std::copy(xt.begin(), xt.end(), x_t.begin() + i * plane);
        std::copy(tgt.begin(), tgt.end(), target.begin() + i * plane);
    }
    auto input = assemble_input(cfg, x_t, samples, params);
    auto cond = condition_values(cfg, params);
    auto target_tensor = ad::Tensor<float>::from({n, 1, cfg.resolution, cfg.resolution},
                                                 std::vector<float>(target.begin(), target.end()));

    model_.params().zero_grad();
    auto loss = ad::mse_loss(model_.forward(input, times, cond), target_tensor);
    const double value = loss.item();
    if (!std::isfinite(value)) {
        throw Error("training diverged: non-finite loss at step " + std::to_string(state_.step + 1));
    }
    ad::backward(loss);
    ad::adamw_step(model_.params(), state_.optimizer, state_.train.optimizer);
    ++state_.step;
    state_.losses.push_back(value);
    return value;
}

void Trainer::run(std::int64_t until, const std::function<void(std::int64_t, double)>& on_step) {
    while (state_.step < until) {
        double loss = step();
        if (on_step) on_step(state_.step, loss);
    }
}

void Trainer::save(const std::filesystem::path& path) const {
    ad::Checkpoint ck;
    model_.export_params(ck);
    const auto& entries = model_.params().entries();
    for (std::size_t k = 0; k < state_.optimizer.m.size(); ++k) {
        ck.tensors.push_back({"adamw.m." + entries[k].name, entries[k].tensor.shape(), state_.optimizer.m[k]});
        ck.tensors.push_back({"adamw.v." + entries[k].name, entries[k].tensor.shape(), state_.optimizer.v[k]});
    }
    std::ostringstream rng;
    rng << rng_;
    ck.meta = {{"kind", "trainer"},
               {"step", state_.step},
               {"optimizer_step", state_.optimizer.step},
               {"losses", state_.losses},
               {"rng_state", rng.str()},
               {"config", state_.config},
               {"train", state_.train}};
    ad::save_checkpoint(path, ck);
}

void Trainer::restore(const std::filesystem::path& path) {
    ad::Checkpoint ck = ad::load_checkpoint(path);
    if (ck.meta.value("kind", "") != "trainer") throw IoError(path.string() + " is not a trainer checkpoint");
    if (ck.meta.at("config").get<DenoiserConfig>() != state_.config) {
        throw ConfigError("checkpoint model configuration differs from the trainer's");
    }
    model_.import_params(ck);
    state_.step = ck.meta.at("step").get<std::int64_t>();
    state_.optimizer.step = ck.meta.at("optimizer_step").get<std::int64_t>();
    state_.losses = ck.meta.at("losses").get<std::vector<double>>();
    state_.train = ck.meta.at("train").get<TrainConfig>();
    state_.optimizer.m.clear();
    state_.optimizer.v.clear();
    if (state_.optimizer.step > 0) {
        for (const auto& e : model_.params().entries()) {
            state_.optimizer.m.push_back(ck.get("adamw.m." + e.name).data);
            state_.optimizer.v.push_back(ck.get("adamw.v." + e.name).data);
        }
    }
    std::istringstream rng(ck.meta.at("rng_state").get<std::string>());
    rng >> rng_;
    if (!rng) throw IoError("corrupt RNG state in " + path.string());
}

UNet<float> load_model(const std::filesystem::path& path) {
    ad::Checkpoint ck = ad::load_checkpoint(path);
    UNet<float> model(ck.meta.at("config").get<DenoiserConfig>(), 0);
    model.import_params(ck);
    return model;
}

void save_model(const std::filesystem::path& path, const UNet<float>& model) {
    ad::Checkpoint ck;
    model.export_params(ck);
    ck.meta = {{"kind", "model"}, {"config", model.config()}};
    ad::save_checkpoint(path, ck);
}

}  // namespace umbra::lab
