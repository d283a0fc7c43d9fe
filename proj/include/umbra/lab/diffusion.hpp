// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "umbra/scene.hpp"

namespace umbra::lab {

/// Noise schedule x_t = alpha(t)·x0 + sigma(t)·eps on t in [0,1].
struct Schedule {
    std::function<double(double)> alpha;
    std::function<double(double)> sigma;

    /// alpha = cos(pi t / 2), sigma = sin(pi t / 2).
    static Schedule cosine();
};

enum class Objective { kEps, kSample, kV, kRectifiedFlow };

std::string to_string(Objective objective);
/// Accepts eps, sample, v, rf. Throws ConfigError otherwise.
Objective objective_from_string(const std::string& name);

/// Frequency layout of the sinusoidal embedding. kStandard uses
/// w_i = 10000^(-i/(d/2-1)); kQuadratic uses the exponent -i(i-1)/((d/2)(d/2-1))·ln(10000)
/// in base 2.
enum class FrequencyForm { kStandard, kQuadratic };

std::string to_string(FrequencyForm form);
FrequencyForm frequency_form_from_string(const std::string& name);

/// [cos(w_i v)]_i ++ [sin(w_i v)]_i for i in [0, d/2). Throws ConfigError for odd or non-positive d.
std::vector<double> sinusoidal_embed(double value, int d, FrequencyForm form = FrequencyForm::kStandard);

/// Concatenated embeddings of theta, phi, size (and intensity when requested), each
/// fed as its raw value. Width 3d or 4d.
std::vector<double> build_condition_vector(const scene::LightParams& p, int d, bool with_intensity,
                                           FrequencyForm form = FrequencyForm::kStandard);

/// Start time of the eps/sample/v samplers; alpha(1) = 0 makes the eps identity singular.
inline constexpr double kDiffusionStartTime = 1.0 - 1e-3;

// Elementwise helpers. Sizes must agree (ShapeError otherwise).

std::vector<double> forward_diffuse(std::span<const double> x0, std::span<const double> eps, double t,
                                    const Schedule& schedule);
std::vector<double> rf_interpolate(std::span<const double> x0, std::span<const double> x1, double t);
/// eps → eps; sample → x0; v → alpha·eps − sigma·x0; rf → eps − x0.
std::vector<double> loss_target(Objective objective, std::span<const double> x0, std::span<const double> eps, double t,
                                const Schedule& schedule);

struct Reconstruction {
    std::vector<double> x0;
    std::vector<double> eps;
};

/// Recovers (x0, eps) from a diffusion-model output at time t. Not defined for rf.
Reconstruction reconstruct(Objective objective, std::span<const double> model_output, std::span<const double> x_t,
                           double t, const Schedule& schedule);

/// Model output for the whole state vector at time t.
using ModelFn = std::function<std::vector<double>(std::span<const double> x_t, double t)>;

/// Integrates from `noise` at the start time down to t = 0 in `steps` uniform steps.
/// rf: Euler x ← x − dt·f(x, t) from t = 1. Others: deterministic re-projection
/// x ← alpha(t')·x0_hat + sigma(t')·eps_hat from kDiffusionStartTime. Returns model-space
/// values without clamping. Throws ConfigError when steps < 1.
std::vector<double> integrate(const ModelFn& model, std::vector<double> noise, int steps, Objective objective,
                              const Schedule& schedule);

/// Model space is [-1, 1]; maps are in [0, 1].
inline double to_model_space(double v) { return 2.0 * v - 1.0; }
inline double from_model_space(double v) { return 0.5 * (v + 1.0); }

}  // namespace umbra::lab
