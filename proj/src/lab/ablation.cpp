// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/lab/ablation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "umbra/error.hpp"

namespace umbra::lab {
namespace {

std::string group(Objective objective, int steps, const std::string& track) {
    return to_string(objective) + "/k" + std::to_string(steps) + "/" + track;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

double AblationReport::cell(Objective objective, int steps, const std::string& metric,
                            const std::string& track) const {
    const auto* row = table.find(group(objective, steps, track), metric);
    if (!row) throw ConfigError("ablation report has no cell " + group(objective, steps, track) + " " + metric);
    return row->mean;
}

nlohmann::json AblationReport::to_json() const {
    nlohmann::json curves_json = nlohmann::json::array();
    for (const auto& c : curves) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : c.points) pts.push_back({{"x", p.x}, {"mean", p.mean}, {"std", p.std}});
        curves_json.push_back({{"name", c.name}, {"points", pts}});
    }
    nlohmann::json trends_json = nlohmann::json::array();
    for (const auto& t : trends) {
        trends_json.push_back(
            {{"name", t.name}, {"description", t.description}, {"lhs", t.lhs}, {"rhs", t.rhs}, {"pass", t.pass}});
    }
    return {{"header", header}, {"table", table.to_json()}, {"curves", curves_json}, {"trends", trends_json}};
}

std::string AblationReport::curves_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "series,x,mean,std\n";
    for (const auto& c : curves) {
        for (const auto& p : c.points) out << c.name << ',' << p.x << ',' << p.mean << ',' << p.std << '\n';
    }
    return out.str();
}

void AblationReport::write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    write_text(dir / "ablation.json", to_json().dump(2) + "\n");
    write_text(dir / "ablation.csv", table.to_csv());
    write_text(dir / "curves.csv", curves_csv());
}

std::vector<TrendCheck> trend_checks(const AblationReport& report, const std::vector<Objective>& objectives,
                                     const std::vector<int>& steps, double margin) {
    std::vector<TrendCheck> out;
    const bool has_rf = std::find(objectives.begin(), objectives.end(), Objective::kRectifiedFlow) != objectives.end();
    const bool has_one = std::find(steps.begin(), steps.end(), 1) != steps.end();
    if (!has_rf || !has_one) return out;
    const int k_max = *std::max_element(steps.begin(), steps.end());
    const double rf1 = report.cell(Objective::kRectifiedFlow, 1);
    {
        TrendCheck t;
        t.name = "rf_one_step_vs_many";
        t.lhs = rf1;
        t.rhs = report.cell(Objective::kRectifiedFlow, k_max) - margin;
        t.description = "rf@1 >= rf@" + std::to_string(k_max) + " - " + std::to_string(margin);
        t.pass = t.lhs >= t.rhs;
        out.push_back(t);
    }
    double best_other = -std::numeric_limits<double>::infinity();
    for (Objective o : objectives) {
        if (o != Objective::kRectifiedFlow) best_other = std::max(best_other, report.cell(o, 1));
    }
    if (std::isfinite(best_other)) {
        TrendCheck t;
        t.name = "rf_one_step_vs_other_objectives";
        t.lhs = rf1;
        t.rhs = best_other + margin;
        t.description = "rf@1 >= max(other objectives @1) + " + std::to_string(margin);
        t.pass = t.lhs >= t.rhs;
        out.push_back(t);
    }
    return out;
}

AblationResult run_ablation(const AblationConfig& config, const SampleSet& train, const TrackSets& tracks,
                            const std::function<void(const std::string&)>& log) {
    if (train.items.empty()) throw ConfigError("ablation: training set is empty");
    for (int i = 0; i < 3; ++i) {
        if (!tracks[i] || tracks[i]->items.empty()) {
            throw ConfigError("ablation: track " + std::to_string(i + 1) + " is empty");
        }
    }
    if (config.objectives.empty() || config.steps.empty()) throw ConfigError("ablation: empty objective or step grid");
    for (int k : config.steps) {
        if (k < 1) throw ConfigError("ablation: step counts must be >= 1");
    }
    auto say = [&](const std::string& msg) {
        if (log) log(msg);
    };
    const int k_max = *std::max_element(config.steps.begin(), config.steps.end());

    AblationResult result;
    AblationReport& report = result.report;
    report.header = {{"model", config.model},
                     {"train", config.train},
                     {"objectives", nlohmann::json::array()},
                     {"steps", config.steps},
                     {"seeds", config.seeds},
                     {"curve_iterations", config.curve_iterations},
                     {"curve_seeds", config.curve_seeds},
                     {"margin", config.margin},
                     {"train_items", train.items.size()},
                     {"track_items", {tracks[0]->items.size(), tracks[1]->items.size(), tracks[2]->items.size()}},
                     {"schedule", "alpha=cos(pi t/2), sigma=sin(pi t/2)"},
                     {"timestep_distribution", "uniform[0,1]"},
                     {"reference_rf_one_step_iou_full_scale", kReferenceRfOneStepIou}};

    std::vector<metrics::Observation> all;
    for (Objective objective : config.objectives) {
        report.header["objectives"].push_back(to_string(objective));
        DenoiserConfig mc = config.model;
        mc.objective = objective;
        Trainer trainer(mc, config.train, train);
        CurveSeries iter_curve{"iterations/" + to_string(objective), {}};
        std::vector<std::int64_t> stops = config.curve_iterations;
        std::sort(stops.begin(), stops.end());
        for (std::int64_t stop : stops) {
            if (stop <= 0 || stop >= config.train.iterations) continue;
            trainer.run(stop);
            say(to_string(objective) + ": step " + std::to_string(stop) + " loss " +
                std::to_string(trainer.state().losses.back()));
            auto obs = evaluate_model(trainer.model(), tracks, {k_max}, config.curve_seeds, "curve", config.eval_batch,
                                      config.workers);
            auto agg = metrics::aggregate(obs);
            const auto* row = agg.find("curve/k" + std::to_string(k_max) + "/mean", "iou");
            iter_curve.points.push_back({double(stop), row->mean, row->std});
        }
        trainer.run(config.train.iterations);
        say(to_string(objective) + ": trained " + std::to_string(config.train.iterations) + " steps, final loss " +
            std::to_string(trainer.state().losses.empty() ? 0.0 : trainer.state().losses.back()));
        if (!config.checkpoint_dir.empty()) {
            std::filesystem::create_directories(config.checkpoint_dir);
            trainer.save(config.checkpoint_dir / (to_string(objective) + ".ckpt"));
        }
        auto obs = evaluate_model(trainer.model(), tracks, config.steps, config.seeds, to_string(objective),
                                  config.eval_batch, config.workers);
        all.insert(all.end(), obs.begin(), obs.end());
        auto agg = metrics::aggregate(obs);
        const auto* final_row = agg.find(group(objective, k_max, "mean"), "iou");
        iter_curve.points.push_back({double(config.train.iterations), final_row->mean, final_row->std});

        CurveSeries step_curve{"steps/" + to_string(objective), {}};
        for (int k : config.steps) {
            const auto* row = agg.find(group(objective, k, "mean"), "iou");
            step_curve.points.push_back({double(k), row->mean, row->std});
            say(to_string(objective) + "@" + std::to_string(k) + ": mean track IoU " + std::to_string(row->mean));
        }
        report.curves.push_back(std::move(step_curve));
        report.curves.push_back(std::move(iter_curve));
        result.models.emplace_back(objective, trainer.model());
    }
    report.table = metrics::aggregate(all);
    report.trends = trend_checks(report, config.objectives, config.steps, config.margin);
    return result;
}

}  // namespace umbra::lab
