// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "umbra/autodiff/tensor.hpp"

namespace umbra::ad {

// All operators throw ShapeError naming the operator on incompatible shapes.
// Image tensors are NCHW.

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b);

/// Elementwise product.
template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b);

template <typename T>
Tensor<T> scale(const Tensor<T>& a, T factor);

/// x[N,C,...] + bias[N,C] broadcast over the trailing dimensions.
template <typename T>
Tensor<T> add_per_channel(const Tensor<T>& x, const Tensor<T>& bias);

template <typename T>
Tensor<T> silu(const Tensor<T>& x);

/// x[N,in] · weight[out,in]^T + bias[out].
template <typename T>
Tensor<T> linear(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias);

/// Square kernel k (odd), padding k/2, stride 1 or 2. weight[O,C,k,k], bias[O].
template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias, int stride = 1);

/// Nearest-neighbour ×2 upsampling of NCHW.
template <typename T>
Tensor<T> upsample2x(const Tensor<T>& x);

/// Group normalization over (C/groups, H, W) per sample, then per-channel gamma/beta.
template <typename T>
Tensor<T> group_norm(const Tensor<T>& x, const Tensor<T>& gamma, const Tensor<T>& beta, int groups,
                     T eps = T(1e-5));

/// Concatenation along dimension 1.
template <typename T>
Tensor<T> concat(const std::vector<Tensor<T>>& parts);

/// Scalar sum of all elements.
template <typename T>
Tensor<T> sum(const Tensor<T>& x);

/// mean((pred - target)^2); target receives no gradient.
template <typename T>
Tensor<T> mse_loss(const Tensor<T>& pred, const Tensor<T>& target);

}  // namespace umbra::ad
