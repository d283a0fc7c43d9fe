// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "umbra/autodiff/adamw.hpp"
#include "umbra/autodiff/checkpoint.hpp"
#include "umbra/autodiff/tensor.hpp"
#include "umbra/lab/diffusion.hpp"
#include "umbra/rng.hpp"

namespace umbra::lab {

enum class Conditioning { kScalar, kBlob, kBoth };

std::string to_string(Conditioning mode);
/// Accepts scalar, blob, both.
Conditioning conditioning_from_string(const std::string& name);

struct DenoiserConfig {
    int resolution = 64;
    int base_channels = 32;
    std::vector<int> channel_multipliers{1, 2, 4};
    int blocks_per_level = 2;
    int groups = 8;
    Conditioning conditioning = Conditioning::kScalar;
    Objective objective = Objective::kRectifiedFlow;
    int embed_dim = 256;
    FrequencyForm frequency_form = FrequencyForm::kStandard;
    /// Adds the intensity scalar to the condition vector.
    bool intensity = false;

    bool uses_scalars() const { return conditioning != Conditioning::kBlob; }
    bool uses_blob() const { return conditioning != Conditioning::kScalar; }
    /// Noisy shadow, mask, object gray, and the blob map when enabled.
    int input_channels() const { return uses_blob() ? 4 : 3; }
    int condition_width() const { return uses_scalars() ? embed_dim * (intensity ? 4 : 3) : 0; }
    /// Throws ConfigError on an inconsistent configuration.
    void validate() const;

    friend bool operator==(const DenoiserConfig&, const DenoiserConfig&) = default;
};

void to_json(nlohmann::json& j, const DenoiserConfig& c);
void from_json(const nlohmann::json& j, DenoiserConfig& c);

/// Conditional U-Net predicting one channel from input_channels() channels.
/// Timestep embedding is sinusoidal in 1000·t; the light condition vector passes
/// through its own MLP and is added to it. A zero-initialised 1×1 convolution maps
/// the raw input straight to the output.
template <typename T>
class UNet {
public:
    UNet(const DenoiserConfig& config, std::uint64_t seed);

    const DenoiserConfig& config() const { return config_; }
    ad::ParamStore<T>& params() { return params_; }
    const ad::ParamStore<T>& params() const { return params_; }

    /// x: [N, input_channels, R, R]; t: N values; condition: N × condition_width() values.
    ad::Tensor<T> forward(const ad::Tensor<T>& x, std::span<const T> t, std::span<const T> condition) const;

    void export_params(ad::Checkpoint& checkpoint) const;
    /// Throws IoError when a tensor is missing or has the wrong shape.
    void import_params(const ad::Checkpoint& checkpoint);

private:
    struct Norm {
        ad::Tensor<T> gamma, beta;
    };
    struct Conv {
        ad::Tensor<T> w, b;
    };
    struct Dense {
        ad::Tensor<T> w, b;
    };
    struct ResBlock {
        Norm norm1;
        Conv conv1;
        Dense emb;
        Norm norm2;
        Conv conv2;
        bool has_skip = false;
        Conv skip;
    };

    Norm make_norm(const std::string& name, int channels);
    Conv make_conv(const std::string& name, int in, int out, int k, bool zero = false);
    Dense make_dense(const std::string& name, int in, int out);
    ResBlock make_res(const std::string& name, int in, int out);

    ad::Tensor<T> apply(const Norm& n, const ad::Tensor<T>& x) const;
    ad::Tensor<T> apply(const Conv& c, const ad::Tensor<T>& x, int stride = 1) const;
    ad::Tensor<T> apply(const Dense& d, const ad::Tensor<T>& x) const;
    ad::Tensor<T> apply(const ResBlock& r, const ad::Tensor<T>& x, const ad::Tensor<T>& emb) const;

    DenoiserConfig config_;
    ad::ParamStore<T> params_;
    Rng* init_rng_ = nullptr;
    int emb_width_ = 0;

    Dense time1_, time2_, cond1_, cond2_;
    Conv conv_in_;
    std::vector<std::vector<ResBlock>> down_;
    std::vector<Conv> downsample_;
    ResBlock mid1_, mid2_;
    std::vector<std::vector<ResBlock>> up_;
    std::vector<Conv> upsample_;
    Norm norm_out_;
    Conv conv_out_;
    Conv input_skip_;
};

}  // namespace umbra::lab
