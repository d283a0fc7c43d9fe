// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "umbra/autodiff/adamw.hpp"
#include "umbra/lab/data.hpp"
#include "umbra/lab/diffusion.hpp"
#include "umbra/lab/unet.hpp"
#include "umbra/rng.hpp"

namespace umbra::lab {

struct TrainConfig {
    std::int64_t iterations = 5000;
    int batch = 16;
    ad::AdamWConfig optimizer{};
    std::uint64_t seed = 0;

    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

/// Range of the intensity scalar drawn for intensity-conditioned training.
inline constexpr double kIntensityMin = 0.1, kIntensityMax = 1.9;

struct TrainRunState {
    std::int64_t step = 0;
    ad::AdamWState<float> optimizer;
    std::vector<double> losses;
    std::string rng_state;
    DenoiserConfig config;
    TrainConfig train;
};

/// Builds the network input [N, C, R, R] for noisy states `x_t` (N·R·R values in model space).
ad::Tensor<float> assemble_input(const DenoiserConfig& config, std::span<const double> x_t,
                                 std::span<const Sample* const> samples, std::span<const scene::LightParams> params);

/// Condition vectors for `params`, N × config.condition_width() values.
std::vector<float> condition_values(const DenoiserConfig& config, std::span<const scene::LightParams> params);

/// Owns a model, its optimizer state and the batch RNG. Single-threaded.
class Trainer {
public:
    /// Model weights are initialised from train.seed. Throws ConfigError when the data
    /// resolution differs from the model resolution or the set is empty.
    Trainer(const DenoiserConfig& config, const TrainConfig& train, const SampleSet& data);

    /// One optimisation step; returns the batch loss. Throws Error carrying the step
    /// index when the loss is not finite.
    double step();
    /// Steps until state().step == until.
    void run(std::int64_t until, const std::function<void(std::int64_t, double)>& on_step = {});

    const UNet<float>& model() const { return model_; }
    UNet<float>& model() { return model_; }
    const TrainRunState& state() const { return state_; }

    void save(const std::filesystem::path& path) const;
    /// Restores weights, optimizer moments, step, loss history and RNG. Throws ConfigError
    /// when the checkpoint's configuration differs from this trainer's.
    void restore(const std::filesystem::path& path);

private:
    const SampleSet* data_;
    UNet<float> model_;
    TrainRunState state_;
    Rng rng_;
    Schedule schedule_ = Schedule::cosine();
};

/// Loads only the model from a trainer checkpoint.
UNet<float> load_model(const std::filesystem::path& path);
void save_model(const std::filesystem::path& path, const UNet<float>& model);

}  // namespace umbra::lab
