// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "umbra/lab/data.hpp"
#include "umbra/lab/unet.hpp"
#include "umbra/metrics.hpp"

namespace umbra::lab {

using TrackSets = std::array<const SampleSet*, 3>;

/// Noise seed for item `index` of track `track` under evaluation seed `seed`.
std::uint64_t eval_noise_seed(std::uint64_t seed, int track, std::size_t index);

/// Samples every track item with every step count and seed (seeds 0..seeds-1) and
/// returns one observation per (group, metric, seed), holding the track mean.
/// Groups are "<prefix>/k<K>/track<n>" plus "<prefix>/k<K>/mean" (mean over tracks).
std::vector<metrics::Observation> evaluate_model(const UNet<float>& model, const TrackSets& tracks,
                                                 const std::vector<int>& steps, int seeds, const std::string& prefix,
                                                 int batch = 16, int workers = 1);

/// Per-object outcome of the softness and reflection checks.
struct ConditioningObject {
    std::string mesh;
    std::vector<double> boundary_gradients;  // one per size, in order
    bool softness = false;
    std::vector<double> reflection_errors;  // |midpoint − anchor| / width, per φ pair
    std::vector<double> separation_ratios;  // predicted / true centroid separation, per φ pair
    bool reflection = false;
    bool truth_reflection = false;  // the same reflection test on ground-truth maps
};

struct ConditioningReport {
    std::vector<ConditioningObject> objects;
    double pass_rate = 0.0;        // objects passing both checks
    double softness_rate = 0.0;
    double reflection_rate = 0.0;
    double truth_reflection_rate = 0.0;
    nlohmann::json to_json() const;
};

inline constexpr std::array<double, 3> kSoftnessSizes{2.0, 4.0, 8.0};
inline constexpr double kReflectionTolerance = 0.1;  // fraction of image width
inline constexpr double kMinSeparationRatio = 0.5;
/// Azimuth pairs within 20° of the image's horizontal axis. Near the view axis the
/// ground-truth shadows themselves miss the tolerance (foreshortening, self-occlusion).
inline constexpr std::array<std::array<int, 2>, 3> kReflectionPairs{{{0, 180}, {20, 200}, {160, 340}}};

/// Softness: at θ=35, φ=0, sizes 2, 4, 8 give strictly decreasing mean boundary gradient.
/// Reflection: for every pair in kReflectionPairs the centroid midpoint lies within
/// kReflectionTolerance·width of the ground anchor, and the two centroids are at least
/// kMinSeparationRatio of the true separation apart (a map that ignores φ would otherwise
/// pass). `track2` must hold complete φ sweeps.
ConditioningReport check_conditioning(const UNet<float>& model, const SampleSet& track2, int steps,
                                      std::uint64_t seed);

struct IntensityReport {
    std::vector<double> intensities;
    std::vector<double> mean_s_rmse;  // per intensity
    double worst = 0.0;
    nlohmann::json to_json() const;
};

/// Compares the intensity-conditioned model at each intensity I with
/// intensity_augment(base output, I), using identical noise.
IntensityReport check_intensity(const UNet<float>& base, const UNet<float>& with_intensity, const SampleSet& set,
                                const std::vector<double>& intensities, int steps, std::uint64_t seed);

}  // namespace umbra::lab
