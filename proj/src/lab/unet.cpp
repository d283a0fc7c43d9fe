// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/lab/unet.hpp"

#include <cmath>

#include "umbra/autodiff/ops.hpp"
#include "umbra/error.hpp"

namespace umbra::lab {

using ad::Tensor;

std::string to_string(Conditioning mode) {
    switch (mode) {
        case Conditioning::kScalar: return "scalar";
        case Conditioning::kBlob: return "blob";
        case Conditioning::kBoth: return "both";
    }
    return "?";
}

Conditioning conditioning_from_string(const std::string& name) {
    if (name == "scalar") return Conditioning::kScalar;
    if (name == "blob") return Conditioning::kBlob;
    if (name == "both") return Conditioning::kBoth;
    throw ConfigError("unknown conditioning mode '" + name + "' (expected scalar, blob or both)");
}

void DenoiserConfig::validate() const {
    if (channel_multipliers.empty()) throw ConfigError("denoiser: channel_multipliers must not be empty");
    if (base_channels <= 0 || blocks_per_level <= 0 || groups <= 0) {
        throw ConfigError("denoiser: base_channels, blocks_per_level and groups must be positive");
    }
    for (int m : channel_multipliers) {
        if (m <= 0 || (base_channels * m) % groups != 0) {
            throw ConfigError("denoiser: every level width must be a positive multiple of groups");
        }
    }
    const int levels = static_cast<int>(channel_multipliers.size());
    if (resolution <= 0 || resolution % (1 << (levels - 1)) != 0) {
        throw ConfigError("denoiser: resolution " + std::to_string(resolution) + " not divisible by 2^" +
                          std::to_string(levels - 1));
    }
    if (embed_dim <= 0 || embed_dim % 2 != 0) throw ConfigError("denoiser: embed_dim must be positive and even");
    if (intensity && !uses_scalars()) throw ConfigError("denoiser: intensity conditioning needs scalar conditioning");
}

void to_json(nlohmann::json& j, const DenoiserConfig& c) {
    j = nlohmann::json{{"resolution", c.resolution},
                       {"base_channels", c.base_channels},
                       {"channel_multipliers", c.channel_multipliers},
                       {"blocks_per_level", c.blocks_per_level},
                       {"groups", c.groups},
                       {"conditioning", to_string(c.conditioning)},
                       {"objective", to_string(c.objective)},
                       {"embed_dim", c.embed_dim},
                       {"frequency_form", to_string(c.frequency_form)},
                       {"intensity", c.intensity}};
}

void from_json(const nlohmann::json& j, DenoiserConfig& c) {
    c.resolution = j.at("resolution").get<int>();
    c.base_channels = j.at("base_channels").get<int>();
    c.channel_multipliers = j.at("channel_multipliers").get<std::vector<int>>();
    c.blocks_per_level = j.at("blocks_per_level").get<int>();
    c.groups = j.at("groups").get<int>();
    c.conditioning = conditioning_from_string(j.at("conditioning").get<std::string>());
    c.objective = objective_from_string(j.at("objective").get<std::string>());
    c.embed_dim = j.at("embed_dim").get<int>();
    c.frequency_form = frequency_form_from_string(j.at("frequency_form").get<std::string>());
    c.intensity = j.at("intensity").get<bool>();
}

template <typename T>
typename UNet<T>::Norm UNet<T>::make_norm(const std::string& name, int channels) {
    return {params_.add(name + ".gamma", Tensor<T>::full({channels}, T(1))),
            params_.add(name + ".beta", Tensor<T>::zeros({channels}))};
}

template <typename T>
typename UNet<T>::Conv UNet<T>::make_conv(const std::string& name, int in, int out, int k, bool zero) {
    std::vector<T> w(std::size_t(out) * in * k * k, T(0));
    std::vector<T> b(out, T(0));
    if (!zero) {
        const double bound = 1.0 / std::sqrt(double(in * k * k));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (T& v : w) v = T(dist(*init_rng_));
        for (T& v : b) v = T(dist(*init_rng_));
    }
    return {params_.add(name + ".weight", Tensor<T>::from({out, in, k, k}, std::move(w))),
            params_.add(name + ".bias", Tensor<T>::from({out}, std::move(b)))};
}

template <typename T>
typename UNet<T>::Dense UNet<T>::make_dense(const std::string& name, int in, int out) {
    const double bound = 1.0 / std::sqrt(double(in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    std::vector<T> w(std::size_t(out) * in);
    std::vector<T> b(out);
    for (T& v : w) v = T(dist(*init_rng_));
    for (T& v : b) v = T(dist(*init_rng_));
    return {params_.add(name + ".weight", Tensor<T>::from({out, in}, std::move(w))),
            params_.add(name + ".bias", Tensor<T>::from({out}, std::move(b)))};
}

template <typename T>
typename UNet<T>::ResBlock UNet<T>::make_res(const std::string& name, int in, int out) {
    ResBlock r;
    r.norm1 = make_norm(name + ".norm1", in);
    r.conv1 = make_conv(name + ".conv1", in, out, 3);
    r.emb = make_dense(name + ".emb", emb_width_, out);
    r.norm2 = make_norm(name + ".norm2", out);
    r.conv2 = make_conv(name + ".conv2", out, out, 3);
    if (in != out) {
        r.has_skip = true;
        r.skip = make_conv(name + ".skip", in, out, 1);
    }
    return r;
}

template <typename T>
UNet<T>::UNet(const DenoiserConfig& config, std::uint64_t seed) : config_(config) {
    config_.validate();
    Rng rng(mix_seed(seed));
    init_rng_ = &rng;
    const int base = config_.base_channels;
    emb_width_ = 4 * base;
    const auto& mult = config_.channel_multipliers;
    const int levels = static_cast<int>(mult.size());

    time1_ = make_dense("time.0", config_.embed_dim, emb_width_);
    time2_ = make_dense("time.1", emb_width_, emb_width_);
    if (config_.uses_scalars()) {
        cond1_ = make_dense("cond.0", config_.condition_width(), emb_width_);
        cond2_ = make_dense("cond.1", emb_width_, emb_width_);
    }
    conv_in_ = make_conv("conv_in", config_.input_channels(), base * mult[0], 3);

    std::vector<int> skip_channels{base * mult[0]};
    int ch = base * mult[0];
    down_.resize(levels);
    for (int l = 0; l < levels; ++l) {
        const int out = base * mult[l];
        for (int b = 0; b < config_.blocks_per_level; ++b) {
            down_[l].push_back(make_res("down." + std::to_string(l) + "." + std::to_string(b), ch, out));
            ch = out;
            skip_channels.push_back(ch);
        }
        if (l + 1 < levels) {
            downsample_.push_back(make_conv("down." + std::to_string(l) + ".downsample", ch, ch, 3));
            skip_channels.push_back(ch);
        }
    }
    mid1_ = make_res("mid.0", ch, ch);
    mid2_ = make_res("mid.1", ch, ch);

    up_.resize(levels);
    for (int l = levels - 1; l >= 0; --l) {
        const int out = base * mult[l];
        for (int b = 0; b <= config_.blocks_per_level; ++b) {
            const int skip = skip_channels.back();
            skip_channels.pop_back();
            up_[l].push_back(make_res("up." + std::to_string(l) + "." + std::to_string(b), ch + skip, out));
            ch = out;
        }
        if (l > 0) upsample_.push_back(make_conv("up." + std::to_string(l) + ".upsample", ch, ch, 3));
    }
    norm_out_ = make_norm("norm_out", ch);
    conv_out_ = make_conv("conv_out", ch, 1, 3, /*zero=*/true);
    input_skip_ = make_conv("input_skip", config_.input_channels(), 1, 1, /*zero=*/true);
    init_rng_ = nullptr;
}

template <typename T>
Tensor<T> UNet<T>::apply(const Norm& n, const Tensor<T>& x) const {
    return ad::group_norm(x, n.gamma, n.beta, config_.groups);
}

template <typename T>
Tensor<T> UNet<T>::apply(const Conv& c, const Tensor<T>& x, int stride) const {
    return ad::conv2d(x, c.w, c.b, stride);
}

template <typename T>
Tensor<T> UNet<T>::apply(const Dense& d, const Tensor<T>& x) const {
    return ad::linear(x, d.w, d.b);
}

template <typename T>
Tensor<T> UNet<T>::apply(const ResBlock& r, const Tensor<T>& x, const Tensor<T>& emb) const {
    Tensor<T> h = apply(r.conv1, ad::silu(apply(r.norm1, x)));
    h = ad::add_per_channel(h, apply(r.emb, ad::silu(emb)));
    h = apply(r.conv2, ad::silu(apply(r.norm2, h)));
    return ad::add(r.has_skip ? apply(r.skip, x) : x, h);
}

template <typename T>
Tensor<T> UNet<T>::forward(const Tensor<T>& x, std::span<const T> t, std::span<const T> condition) const {
    if (x.rank() != 4 || x.dim(1) != config_.input_channels() || x.dim(2) != config_.resolution ||
        x.dim(3) != config_.resolution) {
        throw ShapeError("unet: input " + ad::shape_str(x.shape()) + " does not match the configuration");
    }
    const int n = x.dim(0);
    const std::size_t cw = config_.condition_width();
    if (t.size() != std::size_t(n) || condition.size() != n * cw) {
        throw ShapeError("unet: expected " + std::to_string(n) + " timesteps and " + std::to_string(n * cw) +
                         " condition values");
    }
    const int d = config_.embed_dim;
    std::vector<T> tvec(std::size_t(n) * d);
    for (int i = 0; i < n; ++i) {
        auto e = sinusoidal_embed(1000.0 * double(t[i]), d, config_.frequency_form);
        for (int k = 0; k < d; ++k) tvec[std::size_t(i) * d + k] = T(e[k]);
    }
    Tensor<T> emb = apply(time2_, ad::silu(apply(time1_, Tensor<T>::from({n, d}, std::move(tvec)))));
    if (config_.uses_scalars()) {
        auto c = Tensor<T>::from({n, int(cw)}, std::vector<T>(condition.begin(), condition.end()));
        emb = ad::add(emb, apply(cond2_, ad::silu(apply(cond1_, c))));
    }

    const int levels = static_cast<int>(down_.size());
    Tensor<T> h = apply(conv_in_, x);
    std::vector<Tensor<T>> skips{h};
    for (int l = 0; l < levels; ++l) {
        for (const auto& block : down_[l]) {
            h = apply(block, h, emb);
            skips.push_back(h);
        }
        if (l + 1 < levels) {
            h = apply(downsample_[l], h, 2);
            skips.push_back(h);
        }
    }
    h = apply(mid2_, apply(mid1_, h, emb), emb);
    std::size_t up_index = 0;
    for (int l = levels - 1; l >= 0; --l) {
        for (const auto& block : up_[l]) {
            h = apply(block, ad::concat<T>({h, skips.back()}), emb);
            skips.pop_back();
        }
        if (l > 0) h = apply(upsample_[up_index++], ad::upsample2x(h));
    }
    return ad::add(apply(conv_out_, ad::silu(apply(norm_out_, h))), apply(input_skip_, x));
}

template <typename T>
void UNet<T>::export_params(ad::Checkpoint& checkpoint) const {
    for (const auto& e : params_.entries()) {
        auto values = e.tensor.data();
        checkpoint.tensors.push_back({e.name, e.tensor.shape(), std::vector<float>(values.begin(), values.end())});
    }
}

template <typename T>
void UNet<T>::import_params(const ad::Checkpoint& checkpoint) {
    for (auto& e : params_.entries()) {
        const auto& src = checkpoint.get(e.name);
        if (src.shape != e.tensor.shape()) {
            throw IoError("checkpoint tensor '" + e.name + "' has shape " + ad::shape_str(src.shape) + ", expected " +
                          ad::shape_str(e.tensor.shape()));
        }
        auto dst = e.tensor.data();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = T(src.data[i]);
    }
}

template class UNet<float>;
template class UNet<double>;

}  // namespace umbra::lab
