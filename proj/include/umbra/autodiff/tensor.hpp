// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace umbra::ad {

using Shape = std::vector<int>;

std::size_t numel(const Shape& shape);
std::string shape_str(const Shape& shape);

/// Graph node. A node records its parents and a closure that pushes its gradient
/// into them; leaves (parameters, inputs) have neither.
template <typename T>
struct Node {
    Shape shape;
    std::vector<T> value;
    std::vector<T> grad;
    bool requires_grad = false;
    const char* op = "leaf";
    std::vector<std::shared_ptr<Node>> parents;
    std::function<void(Node&)> backward;

    bool is_leaf() const { return parents.empty(); }
    std::vector<T>& ensure_grad() {
        if (grad.size() != value.size()) grad.assign(value.size(), T(0));
        return grad;
    }
};

/// Shared handle to a graph node. Copies alias the same storage.
template <typename T>
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::shared_ptr<Node<T>> node) : node_(std::move(node)) {}

    static Tensor zeros(Shape shape, bool requires_grad = false);
    static Tensor full(Shape shape, T value, bool requires_grad = false);
    /// Throws ShapeError when data.size() != numel(shape).
    static Tensor from(Shape shape, std::vector<T> data, bool requires_grad = false);

    bool defined() const { return node_ != nullptr; }
    const Shape& shape() const { return node_->shape; }
    int dim(int i) const { return node_->shape.at(i); }
    int rank() const { return static_cast<int>(node_->shape.size()); }
    std::size_t numel() const { return node_->value.size(); }

    std::span<T> data() { return node_->value; }
    std::span<const T> data() const { return node_->value; }
    /// Gradient slot, allocated (zeroed) on first access.
    std::span<T> grad() { return node_->ensure_grad(); }
    bool has_grad() const { return node_->grad.size() == node_->value.size(); }
    void zero_grad() { node_->grad.assign(node_->value.size(), T(0)); }

    bool requires_grad() const { return node_->requires_grad; }
    void set_requires_grad(bool on) { node_->requires_grad = on; }
    T item() const;

    const std::shared_ptr<Node<T>>& node() const { return node_; }

private:
    std::shared_ptr<Node<T>> node_;
};

/// While alive on this thread, operations record no graph.
class NoGradGuard {
public:
    NoGradGuard();
    ~NoGradGuard();
    NoGradGuard(const NoGradGuard&) = delete;
    NoGradGuard& operator=(const NoGradGuard&) = delete;

private:
    bool previous_;
};

bool grad_enabled();

/// Reverse-mode sweep from a scalar. Intermediate gradients are recomputed on every
/// call; leaf gradients accumulate until zero_grad(). Throws ShapeError for a
/// non-scalar loss.
template <typename T>
void backward(const Tensor<T>& loss);

}  // namespace umbra::ad
