// Copyright 2026 The hrdiff Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Rank-2 tensors with reverse-mode gradients.
//
// A Tensor is a cheap handle to a node holding values, an optional gradient
// and, for results of differentiable ops, the parents and a backward closure.
// Vectors are 1 x n. Values are 64-bit.

#ifndef HRDIFF_TENSOR_H_
#define HRDIFF_TENSOR_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace hrdiff {

struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return rows * cols; }
  bool operator==(const Shape&) const = default;
};

std::string ShapeString(const Shape& s);

namespace internal {

struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;  // empty until first accumulation
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;

  void EnsureGrad() {
    if (grad.empty()) grad.assign(value.size(), 0.0);
  }
};

}  // namespace internal

class Tensor {
 public:
  Tensor() = default;

  static Tensor Zeros(Shape shape, bool requires_grad = false);
  static Tensor Filled(Shape shape, double v, bool requires_grad = false);
  static Tensor FromData(Shape shape, std::vector<double> values,
                         bool requires_grad = false);
  static Tensor Scalar(double v, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::size_t rows() const { return node_->shape.rows; }
  std::size_t cols() const { return node_->shape.cols; }
  std::size_t size() const { return node_->value.size(); }

  const std::vector<double>& values() const { return node_->value; }
  // Direct write access for initialisers, optimisers and finite differences.
  std::vector<double>& mutable_values() { return node_->value; }
  double at(std::size_t r, std::size_t c) const {
    return node_->value[r * node_->shape.cols + c];
  }
  double item() const;

  bool requires_grad() const { return node_->requires_grad; }
  // Gradient values; zeros if nothing has been accumulated.
  std::vector<double> grad() const;
  std::vector<double>& mutable_grad() {
    node_->EnsureGrad();
    return node_->grad;
  }
  bool has_grad() const { return !node_->grad.empty(); }
  void ZeroGrad() { node_->grad.clear(); }

  // Reverse pass from a 1 x 1 tensor; gradients accumulate into every
  // reachable node that requires grad.
  void Backward() const;

  // Same values, no history.
  Tensor Detach() const;

  // Identity of the underlying node.
  const void* id() const { return node_.get(); }

  // Used by op implementations.
  static Tensor FromNode(std::shared_ptr<internal::Node> node) {
    Tensor t;
    t.node_ = std::move(node);
    return t;
  }
  const std::shared_ptr<internal::Node>& node() const { return node_; }

 private:
  std::shared_ptr<internal::Node> node_;
};

// Whether new op results record history (per thread).
bool GradEnabled();

class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

}  // namespace hrdiff

#endif  // HRDIFF_TENSOR_H_
