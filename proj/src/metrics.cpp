// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "umbra/error.hpp"

namespace umbra::metrics {

double soft_iou(const GrayImage& p, const GrayImage& g) {
    require_same_shape(p, g, "soft_iou");
    double inter = 0.0, uni = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        inter += std::min(p.pixels[i], g.pixels[i]);
        uni += std::max(p.pixels[i], g.pixels[i]);
    }
    return uni == 0.0 ? 1.0 : inter / uni;
}

double rmse(const GrayImage& p, const GrayImage& g) {
    require_same_shape(p, g, "rmse");
    if (p.size() == 0) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double d = p.pixels[i] - g.pixels[i];
        acc += d * d;
    }
    return std::sqrt(acc / double(p.size()));
}

double optimal_scale(const GrayImage& p, const GrayImage& g) {
    require_same_shape(p, g, "scaled_rmse");
    double pg = 0.0, pp = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        pg += p.pixels[i] * g.pixels[i];
        pp += p.pixels[i] * p.pixels[i];
    }
    if (pp == 0.0) return 0.0;
    return std::max(0.0, pg / pp);
}

double scaled_rmse(const GrayImage& p, const GrayImage& g) {
    double alpha = optimal_scale(p, g);
    if (p.size() == 0) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double d = alpha * p.pixels[i] - g.pixels[i];
        acc += d * d;
    }
    return std::sqrt(acc / double(p.size()));
}

double zncc(const GrayImage& p, const GrayImage& g) {
    require_same_shape(p, g, "zncc");
    const double n = double(p.size());
    if (n == 0) return 1.0;
    double mp = 0.0, mg = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        mp += p.pixels[i];
        mg += g.pixels[i];
    }
    mp /= n;
    mg /= n;
    double vp = 0.0, vg = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double a = p.pixels[i] - mp, b = g.pixels[i] - mg;
        vp += a * a;
        vg += b * b;
        cov += a * b;
    }
    double sp = std::sqrt(vp / n), sg = std::sqrt(vg / n);
    if (sp < 1e-8 || sg < 1e-8) return rmse(p, g) < 1e-8 ? 1.0 : 0.0;
    return std::clamp(cov / n / (sp * sg), -1.0, 1.0);
}

MetricValues evaluate_all(const GrayImage& prediction, const GrayImage& truth) {
    return {soft_iou(prediction, truth), rmse(prediction, truth), scaled_rmse(prediction, truth),
            zncc(prediction, truth)};
}

double metric_value(const MetricValues& v, const std::string& name) {
    if (name == "iou") return v.iou;
    if (name == "rmse") return v.rmse;
    if (name == "s_rmse") return v.s_rmse;
    if (name == "zncc") return v.zncc;
    throw Error("unknown metric '" + name + "'");
}

const ReportRow* MetricReport::find(const std::string& group, const std::string& metric) const {
    for (const auto& r : rows) {
        if (r.group == group && r.metric == metric) return &r;
    }
    return nullptr;
}

std::string MetricReport::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "group,metric,mean,std,n\n";
    for (const auto& r : rows) out << r.group << ',' << r.metric << ',' << r.mean << ',' << r.std << ',' << r.n << '\n';
    return out.str();
}

nlohmann::json MetricReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"group", r.group}, {"metric", r.metric}, {"mean", r.mean}, {"std", r.std}, {"n", r.n}});
    }
    return arr;
}

MetricReport aggregate(std::span<const Observation> observations) {
    if (observations.empty()) throw Error("aggregate: no observations");
    // (group, metric) -> seed -> (sum, count)
    std::map<std::pair<std::string, std::string>, std::map<std::int64_t, std::pair<double, std::size_t>>> cells;
    for (const auto& o : observations) {
        auto& acc = cells[{o.group, o.metric}][o.seed];
        acc.first += o.value;
        acc.second += 1;
    }
    MetricReport report;
    for (const auto& [key, seeds] : cells) {
        std::vector<double> means;
        for (const auto& [seed, acc] : seeds) means.push_back(acc.first / double(acc.second));
        double mean = 0.0;
        for (double m : means) mean += m;
        mean /= double(means.size());
        double var = 0.0;
        for (double m : means) var += (m - mean) * (m - mean);
        var /= double(means.size());
        report.rows.push_back({key.first, key.second, mean, std::sqrt(var), means.size()});
    }
    return report;
}

double boundary_gradient(const GrayImage& map) {
    double peak = 0.0;
    for (double v : map.pixels) peak = std::max(peak, v);
    if (peak < 1e-6 || map.width < 3 || map.height < 3) return 0.0;
    auto q = [&](int x, int y) { return map.at(x, y) / peak; };
    double acc = 0.0;
    std::size_t count = 0;
    for (int y = 1; y + 1 < map.height; ++y) {
        for (int x = 1; x + 1 < map.width; ++x) {
            double v = q(x, y);
            if (v <= 0.05 || v >= 0.95) continue;
            double gx = 0.5 * (q(x + 1, y) - q(x - 1, y));
            double gy = 0.5 * (q(x, y + 1) - q(x, y - 1));
            acc += std::sqrt(gx * gx + gy * gy);
            ++count;
        }
    }
    return count ? acc / double(count) : 0.0;
}

std::array<double, 2> centroid(const GrayImage& map) {
    double sx = 0.0, sy = 0.0, sw = 0.0;
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            double w = std::max(0.0, map.at(x, y));
            sx += w * (x + 0.5);
            sy += w * (y + 0.5);
            sw += w;
        }
    }
    if (sw == 0.0) return {0.5 * map.width, 0.5 * map.height};
    return {sx / sw, sy / sw};
}

}  // namespace umbra::metrics
