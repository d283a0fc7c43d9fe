// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/lab/evaluation.hpp"

#include <cmath>
#include <map>

#include "umbra/error.hpp"
#include "umbra/forge.hpp"
#include "umbra/lab/sampler.hpp"
#include "umbra/parallel.hpp"
#include "umbra/rng.hpp"

namespace umbra::lab {

std::uint64_t eval_noise_seed(std::uint64_t seed, int track, std::size_t index) {
    return stream_seed(stream_seed(seed, std::uint64_t(track)), index);
}

std::vector<metrics::Observation> evaluate_model(const UNet<float>& model, const TrackSets& tracks,
                                                 const std::vector<int>& steps, int seeds, const std::string& prefix,
                                                 int batch, int workers) {
    for (const auto* t : tracks) {
        if (!t || t->items.empty()) throw ConfigError("evaluate_model: every track needs at least one item");
    }
    if (seeds < 1) throw ConfigError("evaluate_model: seeds must be >= 1");
    // results[seed][k][track] = mean metric values
    std::vector<std::vector<std::array<metrics::MetricValues, 3>>> results(
        seeds, std::vector<std::array<metrics::MetricValues, 3>>(steps.size()));
    parallel_for(seeds, resolve_workers(workers), [&](int seed) {
        for (std::size_t k = 0; k < steps.size(); ++k) {
            for (int tr = 0; tr < 3; ++tr) {
                const SampleSet& set = *tracks[tr];
                std::vector<SampleRequest> req;
                for (std::size_t i = 0; i < set.items.size(); ++i) {
                    req.push_back({&set.items[i], set.items[i].params, eval_noise_seed(seed, tr + 1, i)});
                }
                auto out = generate(model, req, steps[k], batch);
                metrics::MetricValues sum;
                for (std::size_t i = 0; i < out.size(); ++i) {
                    auto m = metrics::evaluate_all(out[i], set.items[i].shadow);
                    sum.iou += m.iou;
                    sum.rmse += m.rmse;
                    sum.s_rmse += m.s_rmse;
                    sum.zncc += m.zncc;
                }
                const double n = double(out.size());
                results[seed][k][tr] = {sum.iou / n, sum.rmse / n, sum.s_rmse / n, sum.zncc / n};
            }
        }
    });
    std::vector<metrics::Observation> obs;
    for (int seed = 0; seed < seeds; ++seed) {
        for (std::size_t k = 0; k < steps.size(); ++k) {
            const std::string base = prefix + "/k" + std::to_string(steps[k]);
            for (const char* name : metrics::kMetricNames) {
                double mean = 0.0;
                for (int tr = 0; tr < 3; ++tr) {
                    double v = metrics::metric_value(results[seed][k][tr], name);
                    obs.push_back({base + "/track" + std::to_string(tr + 1), name, seed, v});
                    mean += v / 3.0;
                }
                obs.push_back({base + "/mean", name, seed, mean});
            }
        }
    }
    return obs;
}

nlohmann::json ConditioningReport::to_json() const {
    nlohmann::json objs = nlohmann::json::array();
    for (const auto& o : objects) {
        objs.push_back({{"mesh", o.mesh},
                        {"boundary_gradients", o.boundary_gradients},
                        {"softness", o.softness},
                        {"reflection_errors", o.reflection_errors},
                        {"separation_ratios", o.separation_ratios},
                        {"reflection", o.reflection},
                        {"truth_reflection", o.truth_reflection}});
    }
    return {{"pass_rate", pass_rate},
            {"softness_rate", softness_rate},
            {"reflection_rate", reflection_rate},
            {"truth_reflection_rate", truth_reflection_rate},
            {"objects", objs}};
}

namespace {

double reflection_error(const GrayImage& a, const GrayImage& b, const std::array<double, 2>& anchor) {
    auto ca = metrics::centroid(a);
    auto cb = metrics::centroid(b);
    const double mx = 0.5 * (ca[0] + cb[0]) - anchor[0];
    const double my = 0.5 * (ca[1] + cb[1]) - anchor[1];
    return std::hypot(mx, my) / a.width;
}

double separation(const GrayImage& a, const GrayImage& b) {
    auto ca = metrics::centroid(a);
    auto cb = metrics::centroid(b);
    return std::hypot(ca[0] - cb[0], ca[1] - cb[1]);
}

}  // namespace

ConditioningReport check_conditioning(const UNet<float>& model, const SampleSet& track2, int steps,
                                      std::uint64_t seed) {
    // Group track-2 items by mesh and azimuth.
    std::map<std::string, std::map<int, const Sample*>> by_mesh;
    std::vector<std::string> order;
    for (const auto& s : track2.items) {
        if (!by_mesh.count(s.mesh)) order.push_back(s.mesh);
        by_mesh[s.mesh][static_cast<int>(std::lround(s.params.phi))] = &s;
    }
    const auto& pairs = kReflectionPairs;
    ConditioningReport report;
    for (std::size_t m = 0; m < order.size(); ++m) {
        const auto& phis = by_mesh[order[m]];
        for (const auto& pr : pairs) {
            for (int phi : pr) {
                if (!phis.count(phi)) {
                    throw ConfigError("check_conditioning: mesh " + order[m] + " lacks phi " + std::to_string(phi));
                }
            }
        }
        std::vector<SampleRequest> req;
        const Sample* base = phis.at(0);
        for (double s : kSoftnessSizes) {
            scene::LightParams p = base->params;
            p.size = s;
            req.push_back({base, p, eval_noise_seed(seed, 2, m)});
        }
        for (const auto& pr : pairs) {
            for (int phi : pr) req.push_back({phis.at(phi), phis.at(phi)->params, eval_noise_seed(seed, 2, m)});
        }
        auto out = generate(model, req, steps, 16);

        ConditioningObject obj;
        obj.mesh = order[m];
        for (std::size_t i = 0; i < kSoftnessSizes.size(); ++i) obj.boundary_gradients.push_back(metrics::boundary_gradient(out[i]));
        obj.softness = obj.boundary_gradients[0] > obj.boundary_gradients[1] &&
                       obj.boundary_gradients[1] > obj.boundary_gradients[2];
        obj.reflection = true;
        obj.truth_reflection = true;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const GrayImage& a = out[kSoftnessSizes.size() + 2 * p];
            const GrayImage& b = out[kSoftnessSizes.size() + 2 * p + 1];
            const Sample& sa = *phis.at(pairs[p][0]);
            const Sample& sb = *phis.at(pairs[p][1]);
            double err = reflection_error(a, b, sa.anchor);
            const double truth_sep = separation(sa.shadow, sb.shadow);
            const double ratio = truth_sep > 0.0 ? separation(a, b) / truth_sep : 1.0;
            obj.reflection_errors.push_back(err);
            obj.separation_ratios.push_back(ratio);
            obj.reflection = obj.reflection && err <= kReflectionTolerance && ratio >= kMinSeparationRatio;
            obj.truth_reflection =
                obj.truth_reflection && reflection_error(sa.shadow, sb.shadow, sa.anchor) <= kReflectionTolerance;
        }
        report.objects.push_back(std::move(obj));
    }
    if (report.objects.empty()) throw ConfigError("check_conditioning: empty track");
    const double n = double(report.objects.size());
    for (const auto& o : report.objects) {
        report.pass_rate += (o.softness && o.reflection) / n;
        report.softness_rate += o.softness / n;
        report.reflection_rate += o.reflection / n;
        report.truth_reflection_rate += o.truth_reflection / n;
    }
    return report;
}

nlohmann::json IntensityReport::to_json() const {
    return {{"intensities", intensities}, {"mean_s_rmse", mean_s_rmse}, {"worst", worst}};
}

IntensityReport check_intensity(const UNet<float>& base, const UNet<float>& with_intensity, const SampleSet& set,
                                const std::vector<double>& intensities, int steps, std::uint64_t seed) {
    if (!with_intensity.config().intensity) throw ConfigError("check_intensity: second model is not intensity-conditioned");
    if (set.items.empty()) throw ConfigError("check_intensity: empty set");
    std::vector<SampleRequest> req;
    for (std::size_t i = 0; i < set.items.size(); ++i) {
        req.push_back({&set.items[i], set.items[i].params, eval_noise_seed(seed, 0, i)});
    }
    auto reference = generate(base, req, steps);
    IntensityReport report;
    for (double level : intensities) {
        auto scaled_req = req;
        for (auto& r : scaled_req) r.params.intensity = level;
        auto out = generate(with_intensity, scaled_req, steps);
        double acc = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) {
            acc += metrics::scaled_rmse(out[i], forge::intensity_augment(reference[i], level));
        }
        report.intensities.push_back(level);
        report.mean_s_rmse.push_back(acc / double(out.size()));
        report.worst = std::max(report.worst, report.mean_s_rmse.back());
    }
    return report;
}

}  // namespace umbra::lab
