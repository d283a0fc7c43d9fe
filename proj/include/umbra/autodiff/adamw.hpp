// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "umbra/autodiff/tensor.hpp"

namespace umbra::ad {

/// Ordered, named collection of trainable leaves. Order is insertion order and
/// defines checkpoint and optimizer-state layout.
template <typename T>
class ParamStore {
public:
    struct Entry {
        std::string name;
        Tensor<T> tensor;
    };

    /// Registers a leaf with requires_grad set. Throws ConfigError on a duplicate name.
    Tensor<T> add(std::string name, Tensor<T> tensor);
    const std::vector<Entry>& entries() const { return entries_; }
    std::vector<Entry>& entries() { return entries_; }
    /// Throws ConfigError when absent.
    Tensor<T> get(const std::string& name) const;
    std::size_t parameter_count() const;
    void zero_grad();

private:
    std::vector<Entry> entries_;
};

struct AdamWConfig {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;
};

/// One AdamW update of a flat parameter block. `step` is the 1-based count after
/// this update. Weight decay is applied to p before the moment update.
template <typename T>
void adamw_update(std::span<T> param, std::span<const T> grad, std::span<T> m, std::span<T> v, std::int64_t step,
                  const AdamWConfig& config);

template <typename T>
struct AdamWState {
    std::int64_t step = 0;
    std::vector<std::vector<T>> m;
    std::vector<std::vector<T>> v;
};

/// Steps every entry in the store using its current gradient (missing gradient = zero).
template <typename T>
void adamw_step(ParamStore<T>& params, AdamWState<T>& state, const AdamWConfig& config);

}  // namespace umbra::ad
