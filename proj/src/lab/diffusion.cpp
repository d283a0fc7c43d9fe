// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/lab/diffusion.hpp"

#include <cmath>
#include <numbers>

#include "umbra/error.hpp"

namespace umbra::lab {
namespace {

void require_equal(std::size_t a, std::size_t b, const char* where) {
    if (a != b) throw ShapeError(std::string(where) + ": sizes " + std::to_string(a) + " and " + std::to_string(b));
}

}  // namespace

Schedule Schedule::cosine() {
    // Exact endpoints; cos(pi/2) alone is 6e-17.
    return {[](double t) { return t >= 1.0 ? 0.0 : std::cos(0.5 * std::numbers::pi * t); },
            [](double t) { return t <= 0.0 ? 0.0 : std::sin(0.5 * std::numbers::pi * t); }};
}

std::string to_string(Objective objective) {
    switch (objective) {
        case Objective::kEps: return "eps";
        case Objective::kSample: return "sample";
        case Objective::kV: return "v";
        case Objective::kRectifiedFlow: return "rf";
    }
    return "?";
}

Objective objective_from_string(const std::string& name) {
    if (name == "eps") return Objective::kEps;
    if (name == "sample") return Objective::kSample;
    if (name == "v") return Objective::kV;
    if (name == "rf" || name == "rectified-flow") return Objective::kRectifiedFlow;
    throw ConfigError("unknown objective '" + name + "' (expected eps, sample, v or rf)");
}

std::string to_string(FrequencyForm form) { return form == FrequencyForm::kStandard ? "standard" : "quadratic"; }

FrequencyForm frequency_form_from_string(const std::string& name) {
    if (name == "standard") return FrequencyForm::kStandard;
    if (name == "quadratic") return FrequencyForm::kQuadratic;
    throw ConfigError("unknown frequency form '" + name + "' (expected standard or quadratic)");
}

std::vector<double> sinusoidal_embed(double value, int d, FrequencyForm form) {
    if (d <= 0 || d % 2 != 0) throw ConfigError("sinusoidal_embed: d must be a positive even integer, got " + std::to_string(d));
    const int half = d / 2;
    const double denom = half > 1 ? double(half - 1) : 1.0;
    std::vector<double> out(d);
    for (int i = 0; i < half; ++i) {
        double w = 0.0;
        if (form == FrequencyForm::kStandard) {
            w = std::pow(10000.0, -double(i) / denom);
        } else {
            w = std::exp2(-double(i) * double(i - 1) / (double(half) * denom) * std::log(10000.0));
        }
        out[i] = std::cos(w * value);
        out[half + i] = std::sin(w * value);
    }
    return out;
}

std::vector<double> build_condition_vector(const scene::LightParams& p, int d, bool with_intensity,
                                           FrequencyForm form) {
    std::vector<double> out;
    out.reserve(std::size_t(d) * (with_intensity ? 4 : 3));
    std::vector<double> values{p.theta, p.phi, p.size};
    if (with_intensity) values.push_back(p.intensity);
    for (double v : values) {
        auto e = sinusoidal_embed(v, d, form);
        out.insert(out.end(), e.begin(), e.end());
    }
    return out;
}

std::vector<double> forward_diffuse(std::span<const double> x0, std::span<const double> eps, double t,
                                    const Schedule& schedule) {
    require_equal(x0.size(), eps.size(), "forward_diffuse");
    const double a = schedule.alpha(t), s = schedule.sigma(t);
    std::vector<double> out(x0.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x0[i] + s * eps[i];
    return out;
}

std::vector<double> rf_interpolate(std::span<const double> x0, std::span<const double> x1, double t) {
    require_equal(x0.size(), x1.size(), "rf_interpolate");
    std::vector<double> out(x0.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = t * x1[i] + (1.0 - t) * x0[i];
    return out;
}

std::vector<double> loss_target(Objective objective, std::span<const double> x0, std::span<const double> eps, double t,
                                const Schedule& schedule) {
    require_equal(x0.size(), eps.size(), "loss_target");
    std::vector<double> out(x0.size());
    switch (objective) {
        case Objective::kEps:
            out.assign(eps.begin(), eps.end());
            break;
        case Objective::kSample:
            out.assign(x0.begin(), x0.end());
            break;
        case Objective::kV: {
            const double a = schedule.alpha(t), s = schedule.sigma(t);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * eps[i] - s * x0[i];
            break;
        }
        case Objective::kRectifiedFlow:
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = eps[i] - x0[i];
            break;
        default:
            throw ConfigError("loss_target: unknown objective");
    }
    return out;
}

Reconstruction reconstruct(Objective objective, std::span<const double> out, std::span<const double> x_t, double t,
                           const Schedule& schedule) {
    require_equal(out.size(), x_t.size(), "reconstruct");
    const double a = schedule.alpha(t), s = schedule.sigma(t);
    Reconstruction r{std::vector<double>(out.size()), std::vector<double>(out.size())};
    for (std::size_t i = 0; i < out.size(); ++i) {
        switch (objective) {
            case Objective::kEps:
                r.eps[i] = out[i];
                r.x0[i] = (x_t[i] - s * out[i]) / a;
                break;
            case Objective::kSample:
                r.x0[i] = out[i];
                r.eps[i] = (x_t[i] - a * out[i]) / s;
                break;
            case Objective::kV:
                r.x0[i] = a * x_t[i] - s * out[i];
                r.eps[i] = s * x_t[i] + a * out[i];
                break;
            case Objective::kRectifiedFlow:
                throw ConfigError("reconstruct: rectified flow has no schedule identity");
        }
    }
    return r;
}

std::vector<double> integrate(const ModelFn& model, std::vector<double> x, int steps, Objective objective,
                              const Schedule& schedule) {
    if (steps < 1) throw ConfigError("sampler: steps must be >= 1, got " + std::to_string(steps));
    if (objective == Objective::kRectifiedFlow) {
        const double dt = 1.0 / steps;
        for (int k = 0; k < steps; ++k) {
            const double t = 1.0 - double(k) / steps;
            auto v = model(x, t);
            require_equal(v.size(), x.size(), "sampler");
            for (std::size_t i = 0; i < x.size(); ++i) x[i] -= dt * v[i];
        }
        return x;
    }
    for (int k = 0; k < steps; ++k) {
        const double t = kDiffusionStartTime * (1.0 - double(k) / steps);
        const double t_next = kDiffusionStartTime * (1.0 - double(k + 1) / steps);
        auto out = model(x, t);
        require_equal(out.size(), x.size(), "sampler");
        Reconstruction r = reconstruct(objective, out, x, t, schedule);
        if (k + 1 == steps) return r.x0;
        const double a = schedule.alpha(t_next), s = schedule.sigma(t_next);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = a * r.x0[i] + s * r.eps[i];
    }
    return x;
}

}  // namespace umbra::lab
