// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "umbra/image.hpp"

namespace umbra::metrics {

/// Σ min(p,g) / Σ max(p,g); 1 when both maps are all zero.
double soft_iou(const GrayImage& p, const GrayImage& g);

/// sqrt(mean((p - g)^2)).
double rmse(const GrayImage& p, const GrayImage& g);

/// Least-squares scale α* = max(0, <p,g>/<p,p>) applied to the prediction.
double optimal_scale(const GrayImage& p, const GrayImage& g);

/// rmse(α* p, g); rmse(0, g) when p is all zero.
double scaled_rmse(const GrayImage& p, const GrayImage& g);

/// Zero-normalized cross-correlation with population statistics. When either map is
/// flat (σ < 1e-8) the result is 1 if the maps agree (rmse < 1e-8) and 0 otherwise.
double zncc(const GrayImage& p, const GrayImage& g);

struct MetricValues {
    double iou = 0.0;
    double rmse = 0.0;
    double s_rmse = 0.0;
    double zncc = 0.0;
};
MetricValues evaluate_all(const GrayImage& prediction, const GrayImage& truth);

inline constexpr std::array<const char*, 4> kMetricNames = {"iou", "rmse", "s_rmse", "zncc"};
double metric_value(const MetricValues& v, const std::string& name);

/// One per-sample observation.
struct Observation {
    std::string group;
    std::string metric;
    std::int64_t seed = 0;
    double value = 0.0;
};

struct ReportRow {
    std::string group;
    std::string metric;
    double mean = 0.0;
    double std = 0.0;   // population std over seeds
    std::size_t n = 0;  // number of seeds
};

/// Per (group, metric): the mean of each seed's sample values, then the mean and
/// population standard deviation across seeds. Rows are ordered by (group, metric).
struct MetricReport {
    std::vector<ReportRow> rows;

    const ReportRow* find(const std::string& group, const std::string& metric) const;
    /// Columns: group,metric,mean,std,n
    std::string to_csv() const;
    nlohmann::json to_json() const;
};

/// Throws Error when `observations` is empty.
MetricReport aggregate(std::span<const Observation> observations);

// Shape descriptors used by the control checks.

/// Mean gradient magnitude (central differences, per pixel) over penumbra pixels,
/// i.e. where the max-normalized map lies strictly within (0.05, 0.95). Sharper
/// shadow boundaries give larger values; 0 for maps without a penumbra.
double boundary_gradient(const GrayImage& map);

/// Value-weighted centroid (x, y) in pixels; image centre when the map is all zero.
std::array<double, 2> centroid(const GrayImage& map);

}  // namespace umbra::metrics
