// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#include "umbra/autodiff/adamw.hpp"

#include <cmath>

#include "umbra/error.hpp"

namespace umbra::ad {

template <typename T>
Tensor<T> ParamStore<T>::add(std::string name, Tensor<T> tensor) {
    for (const auto& e : entries_) {
        if (e.name == name) throw ConfigError("parameter '" + name + "' registered twice");
    }
    tensor.set_requires_grad(true);
    entries_.push_back({std::move(name), tensor});
    return tensor;
}

template <typename T>
Tensor<T> ParamStore<T>::get(const std::string& name) const {
    for (const auto& e : entries_) {
        if (e.name == name) return e.tensor;
    }
    throw ConfigError("no parameter named '" + name + "'");
}

template <typename T>
std::size_t ParamStore<T>::parameter_count() const {
    std::size_t n = 0;
    for (const auto& e : entries_) n += e.tensor.numel();
    return n;
}

template <typename T>
void ParamStore<T>::zero_grad() {
    for (auto& e : entries_) e.tensor.zero_grad();
}

template <typename T>
void adamw_update(std::span<T> param, std::span<const T> grad, std::span<T> m, std::span<T> v, std::int64_t step,
                  const AdamWConfig& c) {
    if (grad.size() != param.size() || m.size() != param.size() || v.size() != param.size()) {
        throw ShapeError("adamw: parameter, gradient and moment sizes differ");
    }
    const T lr = T(c.lr), b1 = T(c.beta1), b2 = T(c.beta2), eps = T(c.eps), wd = T(c.weight_decay);
    const T bc1 = T(1) - T(std::pow(c.beta1, double(step)));
    const T bc2 = T(1) - T(std::pow(c.beta2, double(step)));
    for (std::size_t i = 0; i < param.size(); ++i) {
        param[i] -= lr * wd * param[i];
        m[i] = b1 * m[i] + (T(1) - b1) * grad[i];
        v[i] = b2 * v[i] + (T(1) - b2) * grad[i] * grad[i];
        T mhat = m[i] / bc1;
        T vhat = v[i] / bc2;
        param[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

template <typename T>
void adamw_step(ParamStore<T>& params, AdamWState<T>& state, const AdamWConfig& config) {
    auto& entries = params.entries();
    if (state.m.size() != entries.size()) {
        state.m.clear();
        state.v.clear();
        for (const auto& e : entries) {
            state.m.emplace_back(e.tensor.numel(), T(0));
            state.v.emplace_back(e.tensor.numel(), T(0));
        }
    }
    ++state.step;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        auto& t = entries[k].tensor;
        std::span<T> g = t.grad();
        adamw_update<T>(t.data(), g, state.m[k], state.v[k], state.step, config);
    }
}

template class ParamStore<float>;
template class ParamStore<double>;
template void adamw_update<float>(std::span<float>, std::span<const float>, std::span<float>, std::span<float>,
                                  std::int64_t, const AdamWConfig&);
template void adamw_update<double>(std::span<double>, std::span<const double>, std::span<double>,
                                   std::span<double>, std::int64_t, const AdamWConfig&);
template void adamw_step<float>(ParamStore<float>&, AdamWState<float>&, const AdamWConfig&);
template void adamw_step<double>(ParamStore<double>&, AdamWState<double>&, const AdamWConfig&);

}  // namespace umbra::ad
