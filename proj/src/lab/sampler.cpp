// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/lab/sampler.hpp"

#include <algorithm>
#include <random>

#include "umbra/error.hpp"
#include "umbra/lab/trainer.hpp"
#include "umbra/rng.hpp"

namespace umbra::lab {

std::vector<double> initial_noise(std::uint64_t seed, int resolution) {
    Rng rng(mix_seed(seed));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> out(std::size_t(resolution) * resolution);
    for (double& v : out) v = gauss(rng);
    return out;
}

std::vector<GrayImage> generate(const UNet<float>& model, std::span<const SampleRequest> requests, int steps,
                                int batch) {
    if (batch < 1) throw ConfigError("generate: batch must be >= 1");
    const DenoiserConfig& cfg = model.config();
    const int r = cfg.resolution;
    const std::size_t plane = std::size_t(r) * r;
    const Schedule schedule = Schedule::cosine();
    ad::NoGradGuard no_grad;
    std::vector<GrayImage> out;
    out.reserve(requests.size());
    for (std::size_t begin = 0; begin < requests.size(); begin += batch) {
        const std::size_t end = std::min(requests.size(), begin + batch);
        const int n = static_cast<int>(end - begin);
        std::vector<const Sample*> samples;
        std::vector<scene::LightParams> params;
        std::vector<double> x;
        for (std::size_t i = begin; i < end; ++i) {
            if (!requests[i].sample) throw ConfigError("generate: request without a sample");
            samples.push_back(requests[i].sample);
            params.push_back(requests[i].params);
            auto noise = initial_noise(requests[i].noise_seed, r);
            x.insert(x.end(), noise.begin(), noise.end());
        }
        const auto cond = condition_values(cfg, params);
        ModelFn fn = [&](std::span<const double> x_t, double t) {
            auto input = assemble_input(cfg, x_t, samples, params);
            std::vector<float> times(n, float(t));
            auto y = model.forward(input, times, cond);
            auto v = y.data();
            return std::vector<double>(v.begin(), v.end());
        };
        auto x0 = integrate(fn, std::move(x), steps, cfg.objective, schedule);
        for (int i = 0; i < n; ++i) {
            GrayImage img(r, r);
            for (std::size_t p = 0; p < plane; ++p) {
                img.pixels[p] = std::clamp(from_model_space(x0[i * plane + p]), 0.0, 1.0);
            }
            out.push_back(std::move(img));
        }
    }
    return out;
}

GrayImage sample(const UNet<float>& model, const GrayImage& mask, const GrayImage& object,
                 const scene::LightParams& params, int steps, std::uint64_t seed) {
    Sample s;
    s.mask = mask;
    s.object = object;
    s.shadow = GrayImage(mask.width, mask.height);
    s.params = params;
    SampleRequest req{&s, params, seed};
    return generate(model, std::span<const SampleRequest>(&req, 1), steps, 1).front();
}

}  // namespace umbra::lab
