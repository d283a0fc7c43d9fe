// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "umbra/image.hpp"
#include "umbra/lab/data.hpp"
#include "umbra/lab/unet.hpp"

namespace umbra::lab {

struct SampleRequest {
    const Sample* sample = nullptr;  // supplies mask and object gray
    scene::LightParams params;       // may differ from sample->params
    std::uint64_t noise_seed = 0;
};

/// Standard-normal starting noise for one request.
std::vector<double> initial_noise(std::uint64_t seed, int resolution);

/// Runs the model's sampler for every request, `batch` requests per network call.
/// Each output depends only on its own request. Outputs are clamped to [0, 1].
std::vector<GrayImage> generate(const UNet<float>& model, std::span<const SampleRequest> requests, int steps,
                                int batch = 16);

/// Single-map convenience wrapper over generate().
GrayImage sample(const UNet<float>& model, const GrayImage& mask, const GrayImage& object,
                 const scene::LightParams& params, int steps, std::uint64_t seed);

}  // namespace umbra::lab
