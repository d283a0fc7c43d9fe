// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "umbra/error.hpp"
#include "umbra/metrics.hpp"

using namespace umbra;
using namespace umbra::metrics;

namespace {

GrayImage filled(int w, int h, double v) { return GrayImage(w, h, v); }

}  // namespace

TEST(SoftIou, ClosedFormCases) {
    Rng rng(1);
    GrayImage p = oracle::random_gray(8, 8, rng);
    EXPECT_EQ(soft_iou(p, p), 1.0);
    GrayImage a(4, 1), b(4, 1);
    a.pixels = {1, 0.5, 0, 0};
    b.pixels = {0, 0, 0.3, 1};
    EXPECT_EQ(soft_iou(a, b), 0.0);
    EXPECT_EQ(soft_iou(filled(5, 5, 0.5), filled(5, 5, 1.0)), 0.5);
    EXPECT_EQ(soft_iou(filled(3, 3, 0.0), filled(3, 3, 0.0)), 1.0);
    EXPECT_THROW(soft_iou(filled(3, 3, 0.0), filled(3, 4, 0.0)), ShapeError);
}

TEST(SoftIou, SymmetricAndReducesToSetIou) {
    Rng rng(2);
    for (int i = 0; i < 20; ++i) {
        GrayImage p = oracle::random_gray(9, 7, rng), g = oracle::random_gray(9, 7, rng);
        EXPECT_EQ(soft_iou(p, g), soft_iou(g, p));
        for (double& v : p.pixels) v = v > 0.5;
        for (double& v : g.pixels) v = v > 0.5;
        double inter = 0, uni = 0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            inter += p.pixels[k] && g.pixels[k];
            uni += p.pixels[k] || g.pixels[k];
        }
        EXPECT_DOUBLE_EQ(soft_iou(p, g), inter / uni);
    }
}

TEST(Rmse, ClosedFormCases) {
    Rng rng(3);
    GrayImage p = oracle::random_gray(6, 6, rng);
    EXPECT_EQ(rmse(p, p), 0.0);
    EXPECT_EQ(rmse(filled(4, 4, 0.0), filled(4, 4, 1.0)), 1.0);
    EXPECT_THROW(rmse(filled(3, 3, 0.0), filled(4, 3, 0.0)), ShapeError);
}

TEST(Rmse, TriangleInequality) {
    Rng rng(4);
    for (int i = 0; i < 100; ++i) {
        GrayImage p = oracle::random_gray(8, 8, rng), g = oracle::random_gray(8, 8, rng),
                  h = oracle::random_gray(8, 8, rng);
        EXPECT_LE(rmse(p, g), rmse(p, h) + rmse(h, g) + 1e-9);
    }
}

TEST(ScaledRmse, ClosedFormCases) {
    Rng rng(5);
    GrayImage g = oracle::random_gray(8, 8, rng);
    GrayImage p = g;
    for (double& v : p.pixels) v *= 2.0;
    EXPECT_DOUBLE_EQ(optimal_scale(p, g), 0.5);
    EXPECT_NEAR(scaled_rmse(p, g), 0.0, 1e-15);
    EXPECT_EQ(scaled_rmse(filled(8, 8, 0.0), g), rmse(filled(8, 8, 0.0), g));
    EXPECT_THROW(scaled_rmse(filled(2, 2, 0.0), filled(3, 3, 0.0)), ShapeError);
}

TEST(ScaledRmse, ClosedFormScaleMatchesGoldenSectionSearch) {
    Rng rng(6);
    for (int i = 0; i < 20; ++i) {
        GrayImage p = oracle::random_gray(16, 16, rng), g = oracle::random_gray(16, 16, rng);
        for (double& v : p.pixels) v *= 0.2 + 2.0 * i / 20.0;
        EXPECT_NEAR(optimal_scale(p, g), oracle::golden_section_scale(p, g), 1e-6);
        EXPECT_LE(scaled_rmse(p, g), rmse(p, g) + 1e-12);
    }
}

TEST(ScaledRmse, NegativeCorrelationClampsScaleToZero) {
    GrayImage p(2, 1), g(2, 1);
    p.pixels = {1.0, 0.0};
    g.pixels = {-1.0, 0.0};
    EXPECT_EQ(optimal_scale(p, g), 0.0);
}

TEST(Zncc, ClosedFormCases) {
    Rng rng(7);
    GrayImage p = oracle::random_gray(8, 8, rng);
    EXPECT_NEAR(zncc(p, p), 1.0, 1e-12);
    GrayImage affine = p, anti = p;
    for (double& v : affine.pixels) v = 3.0 * v + 0.25;
    for (double& v : anti.pixels) v = 1.0 - v;
    EXPECT_NEAR(zncc(p, affine), 1.0, 1e-9);
    EXPECT_NEAR(zncc(p, anti), -1.0, 1e-9);
    EXPECT_EQ(zncc(filled(4, 4, 0.3), filled(4, 4, 0.3)), 1.0);
    EXPECT_EQ(zncc(filled(4, 4, 0.3), oracle::random_gray(4, 4, rng)), 0.0);
    EXPECT_THROW(zncc(filled(2, 2, 0.0), filled(3, 3, 0.0)), ShapeError);
}

TEST(Zncc, AffineInvariance) {
    Rng rng(8);
    for (int i = 0; i < 50; ++i) {
        GrayImage p = oracle::random_gray(10, 10, rng), g = oracle::random_gray(10, 10, rng);
        GrayImage q = p;
        double a = 0.1 + 5.0 * uniform01(rng), b = uniform01(rng) - 0.5;
        for (double& v : q.pixels) v = a * v + b;
        EXPECT_NEAR(zncc(q, g), zncc(p, g), 1e-9);
        EXPECT_GE(zncc(p, g), -1.0);
        EXPECT_LE(zncc(p, g), 1.0);
    }
}

TEST(Metrics, MatchNaiveReferencesOnRandomPairs) {
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        GrayImage p = oracle::random_gray(16, 16, rng), g = oracle::random_gray(16, 16, rng);
        EXPECT_NEAR(soft_iou(p, g), oracle::naive_soft_iou(p, g), 1e-12);
        EXPECT_NEAR(rmse(p, g), oracle::naive_rmse(p, g), 1e-12);
        EXPECT_NEAR(scaled_rmse(p, g), oracle::naive_scaled_rmse(p, g), 1e-12);
        EXPECT_NEAR(zncc(p, g), oracle::naive_zncc(p, g), 1e-12);
        auto all = evaluate_all(p, g);
        EXPECT_EQ(all.iou, soft_iou(p, g));
        EXPECT_EQ(metric_value(all, "zncc"), all.zncc);
    }
}

TEST(Aggregate, SingleSeedHasZeroStd) {
    std::vector<Observation> obs{{"a", "iou", 0, 0.7}};
    auto r = aggregate(obs);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(r.rows[0].std, 0.0);
    EXPECT_EQ(r.rows[0].n, 1u);
}

TEST(Aggregate, TwoSeeds) {
    std::vector<Observation> obs{{"a", "iou", 0, 0.7}, {"a", "iou", 1, 0.8}};
    auto r = aggregate(obs);
    EXPECT_NEAR(r.find("a", "iou")->mean, 0.75, 1e-15);
    EXPECT_NEAR(r.find("a", "iou")->std, 0.05, 1e-15);
}

TEST(Aggregate, AveragesSamplesWithinASeedThenAcrossSeeds) {
    Rng rng(10);
    std::vector<Observation> obs;
    std::vector<double> seed_means;
    for (int seed = 0; seed < 10; ++seed) {
        double acc = 0.0;
        for (int k = 0; k < 7; ++k) {
            double v = uniform01(rng);
            acc += v;
            obs.push_back({"g", "rmse", seed, v});
        }
        seed_means.push_back(acc / 7.0);
    }
    double mean = 0.0;
    for (double m : seed_means) mean += m / 10.0;
    double var = 0.0;
    for (double m : seed_means) var += (m - mean) * (m - mean) / 10.0;
    auto r = aggregate(obs);
    EXPECT_NEAR(r.find("g", "rmse")->mean, mean, 1e-12);
    EXPECT_NEAR(r.find("g", "rmse")->std, std::sqrt(var), 1e-12);
    EXPECT_EQ(r.find("g", "rmse")->n, 10u);
    EXPECT_EQ(r.find("g", "iou"), nullptr);
}

TEST(Aggregate, EmptyInputIsAnError) {
    std::vector<Observation> none;
    EXPECT_THROW(aggregate(none), Error);
}

TEST(MetricReport, CsvColumnOrder) {
    std::vector<Observation> obs{{"track1", "iou", 0, 0.5}};
    std::string csv = aggregate(obs).to_csv();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "group,metric,mean,std,n");
    EXPECT_NE(csv.find("track1,iou,0.5,0,1"), std::string::npos);
}

TEST(BoundaryGradient, SharperEdgesScoreHigher) {
    auto ramp = [](double width) {
        GrayImage g(64, 8);
        for (int y = 0; y < 8; ++y) {
            for (int x = 0; x < 64; ++x) g.at(x, y) = std::clamp(0.5 - (x - 32.0) / width, 0.0, 1.0);
        }
        return g;
    };
    // Inside a linear ramp of width w the gradient magnitude is 1/w.
    EXPECT_NEAR(boundary_gradient(ramp(10.0)), 0.1, 1e-12);
    EXPECT_GT(boundary_gradient(ramp(4.0)), boundary_gradient(ramp(16.0)));
    EXPECT_EQ(boundary_gradient(GrayImage(8, 8, 0.0)), 0.0);
}

TEST(Centroid, PixelCentresAndEmptyMap) {
    GrayImage g(10, 10, 0.0);
    g.at(2, 7) = 1.0;
    auto c = centroid(g);
    EXPECT_EQ(c[0], 2.5);
    EXPECT_EQ(c[1], 7.5);
    auto e = centroid(GrayImage(10, 6, 0.0));
    EXPECT_EQ(e[0], 5.0);
    EXPECT_EQ(e[1], 3.0);
}
