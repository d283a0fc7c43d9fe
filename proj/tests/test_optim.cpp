// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "oracles.hpp"
#include "umbra/autodiff/adamw.hpp"
#include "umbra/autodiff/checkpoint.hpp"
#include "umbra/autodiff/ops.hpp"
#include "umbra/error.hpp"

using namespace umbra;
using namespace umbra::ad;

TEST(AdamW, FirstStepClosedForm) {
    // After one step the bias-corrected moments are g and g², so the update is
    // p ← p(1 − lr·wd) − lr·g/(|g| + eps).
    for (double g : {0.3, -2.5, 1e-3}) {
        for (double wd : {0.0, 0.01}) {
            AdamWConfig c;
            c.lr = 1e-2;
            c.weight_decay = wd;
            std::vector<double> p{1.25}, grad{g}, m{0.0}, v{0.0};
            adamw_update<double>(p, grad, m, v, 1, c);
            double expected = 1.25 * (1.0 - c.lr * wd) - c.lr * g / (std::abs(g) + c.eps);
            EXPECT_NEAR(p[0], expected, 1e-12) << g << " " << wd;
        }
    }
}

TEST(AdamW, ZeroGradientWithoutDecayIsANoOp) {
    std::vector<double> p{0.5, -3.0}, grad{0.0, 0.0}, m{0.0, 0.0}, v{0.0, 0.0};
    AdamWConfig c;
    c.lr = 0.1;
    for (int step = 1; step <= 5; ++step) adamw_update<double>(p, grad, m, v, step, c);
    EXPECT_EQ(p, (std::vector<double>{0.5, -3.0}));
}

TEST(AdamW, DecayIsDecoupledFromTheGradient) {
    std::vector<double> p{2.0, -4.0}, grad{0.0, 0.0}, m{0.0, 0.0}, v{0.0, 0.0};
    AdamWConfig c;
    c.lr = 0.05;
    c.weight_decay = 0.2;
    adamw_update<double>(p, grad, m, v, 1, c);
    EXPECT_DOUBLE_EQ(p[0], 2.0 * (1.0 - 0.05 * 0.2));
    EXPECT_DOUBLE_EQ(p[1], -4.0 * (1.0 - 0.05 * 0.2));
}

TEST(AdamW, StoreStepMatchesFlatUpdates) {
    ParamStore<double> store;
    Rng rng(1);
    auto a = store.add("a", oracle::random_tensor({3}, rng));
    auto b = store.add("b", oracle::random_tensor({2, 2}, rng));
    EXPECT_THROW(store.add("a", oracle::random_tensor({1}, rng)), ConfigError);
    EXPECT_THROW(store.get("missing"), ConfigError);
    EXPECT_EQ(store.parameter_count(), 7u);
    std::vector<double> a0(a.data().begin(), a.data().end());
    AdamWConfig c;
    c.lr = 0.01;
    AdamWState<double> state;
    for (int step = 1; step <= 3; ++step) {
        store.zero_grad();
        backward(oracle::weighted_sum(a, 5));
        adamw_step(store, state, c);
    }
    EXPECT_EQ(state.step, 3);
    std::vector<double> m(3, 0.0), v(3, 0.0), grad(3);
    Rng wrng(5);
    auto w = oracle::random_tensor({3}, wrng, false);
    for (int k = 0; k < 3; ++k) grad[k] = w.data()[k];
    for (int step = 1; step <= 3; ++step) adamw_update<double>(a0, grad, m, v, step, c);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(a.data()[k], a0[k]);
    (void)b;
}

TEST(Checkpoint, RoundTrip) {
    oracle::TempDir dir("ckpt");
    Checkpoint ck;
    ck.tensors.push_back({"conv.w", {2, 1, 3, 3}, std::vector<float>(18)});
    ck.tensors.push_back({"bias", {4}, {1.5f, -2.0f, 3.25f, 0.0f}});
    for (int i = 0; i < 18; ++i) ck.tensors[0].data[i] = 0.1f * i;
    ck.meta = {{"step", 12}, {"note", "x"}};
    save_checkpoint(dir.path() / "a.ckpt", ck);
    Checkpoint back = load_checkpoint(dir.path() / "a.ckpt");
    ASSERT_EQ(back.tensors.size(), 2u);
    EXPECT_EQ(back.get("conv.w").shape, (Shape{2, 1, 3, 3}));
    EXPECT_EQ(back.get("conv.w").data, ck.tensors[0].data);
    EXPECT_EQ(back.get("bias").data, ck.tensors[1].data);
    EXPECT_EQ(back.meta, ck.meta);
    EXPECT_THROW(back.get("nope"), IoError);
}

TEST(Checkpoint, TruncatedFileIsAnIoError) {
    oracle::TempDir dir("ckpt-bad");
    Checkpoint ck;
    ck.tensors.push_back({"w", {8}, std::vector<float>(8, 1.0f)});
    save_checkpoint(dir.path() / "a.ckpt", ck);
    std::string bytes = oracle::read_text(dir.path() / "a.ckpt");
    std::ofstream(dir.path() / "b.ckpt", std::ios::binary) << bytes.substr(0, bytes.size() - 5);
    EXPECT_THROW(load_checkpoint(dir.path() / "b.ckpt"), IoError);
    EXPECT_THROW(load_checkpoint(dir.path() / "missing.ckpt"), IoError);
    std::ofstream(dir.path() / "c.ckpt", std::ios::binary) << "garbage";
    EXPECT_THROW(load_checkpoint(dir.path() / "c.ckpt"), IoError);
}

TEST(Checkpoint, PayloadIsLittleEndianFloat32) {
    oracle::TempDir dir("ckpt-layout");
    Checkpoint ck;
    ck.tensors.push_back({"w", {2}, {1.0f, -2.0f}});
    save_checkpoint(dir.path() / "a.ckpt", ck);
    std::string bytes = oracle::read_text(dir.path() / "a.ckpt");
    std::uint64_t header = 0;
    for (int i = 7; i >= 0; --i) header = (header << 8) | static_cast<unsigned char>(bytes[i]);
    auto json = nlohmann::json::parse(bytes.substr(8, header));
    EXPECT_EQ(json["format"], "umbra-checkpoint");
    ASSERT_EQ(bytes.size(), 8 + header + 8);
    const unsigned char* p = reinterpret_cast<const unsigned char*>(bytes.data()) + 8 + header;
    EXPECT_EQ(p[0] | p[1] << 8 | p[2] << 16 | std::uint32_t(p[3]) << 24, 0x3f800000u);
    EXPECT_EQ(p[4] | p[5] << 8 | p[6] << 16 | std::uint32_t(p[7]) << 24, 0xc0000000u);
}
