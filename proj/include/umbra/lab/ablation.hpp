// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "umbra/lab/evaluation.hpp"
#include "umbra/lab/trainer.hpp"
#include "umbra/lab/unet.hpp"
#include "umbra/metrics.hpp"

namespace umbra::lab {

struct AblationConfig {
    /// Objective is overridden per run.
    DenoiserConfig model;
    TrainConfig train;
    std::vector<Objective> objectives{Objective::kEps, Objective::kSample, Objective::kV, Objective::kRectifiedFlow};
    std::vector<int> steps{1, 2, 4, 8, 20};
    int seeds = 10;
    /// Intermediate iterations at which the largest step count is evaluated for the
    /// training curve; the final iteration always comes from the main table.
    std::vector<std::int64_t> curve_iterations;
    int curve_seeds = 1;
    double margin = 0.05;
    int eval_batch = 16;
    int workers = 1;
    /// When set, final models are saved as <dir>/<objective>.ckpt.
    std::filesystem::path checkpoint_dir;
};

struct CurvePoint {
    double x = 0.0;
    double mean = 0.0;
    double std = 0.0;
};

struct CurveSeries {
    std::string name;  // e.g. "steps/rf" or "iterations/eps"
    std::vector<CurvePoint> points;
};

struct TrendCheck {
    std::string name;
    std::string description;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

/// Published RF one-step IoU per track for a full-scale model, kept for context only.
inline constexpr std::array<double, 3> kReferenceRfOneStepIou{0.768, 0.732, 0.736};

struct AblationReport {
    nlohmann::json header;
    metrics::MetricReport table;
    std::vector<CurveSeries> curves;
    std::vector<TrendCheck> trends;

    /// Mean over seeds of the track-averaged metric for one cell. Throws ConfigError when absent.
    double cell(Objective objective, int steps, const std::string& metric = "iou",
                const std::string& track = "mean") const;
    nlohmann::json to_json() const;
    /// Columns: series,x,mean,std
    std::string curves_csv() const;
    /// Writes ablation.json, ablation.csv and curves.csv under `dir`.
    void write(const std::filesystem::path& dir) const;
};

struct AblationResult {
    AblationReport report;
    std::vector<std::pair<Objective, UNet<float>>> models;
};

/// Trains one model per objective with identical budgets and seeds, evaluates the full
/// (objective, steps, seed, track, metric) grid and evaluates the trend checks:
/// rf@1 ≥ rf@max − margin, and rf@1 ≥ max(other objectives @1) + margin.
/// Throws ConfigError before training when the training set or any track is empty.
AblationResult run_ablation(const AblationConfig& config, const SampleSet& train, const TrackSets& tracks,
                            const std::function<void(const std::string&)>& log = {});

/// Evaluates the trend checks on an existing table.
std::vector<TrendCheck> trend_checks(const AblationReport& report, const std::vector<Objective>& objectives,
                                     const std::vector<int>& steps, double margin);

}  // namespace umbra::lab
