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

#include "hrdiff/tensor.h"

#include <stdexcept>
#include <unordered_set>

namespace hrdiff {
namespace {

thread_local bool g_grad_enabled = true;

}  // namespace

std::string ShapeString(const Shape& s) {
  return "[" + std::to_string(s.rows) + " x " + std::to_string(s.cols) + "]";
}

Tensor Tensor::Zeros(Shape shape, bool requires_grad) {
  return Filled(shape, 0.0, requires_grad);
}

Tensor Tensor::Filled(Shape shape, double v, bool requires_grad) {
  auto node = std::make_shared<internal::Node>();
  node->shape = shape;
  node->value.assign(shape.size(), v);
  node->requires_grad = requires_grad;
  return FromNode(std::move(node));
}

Tensor Tensor::FromData(Shape shape, std::vector<double> values,
                        bool requires_grad) {
  if (values.size() != shape.size()) {
    throw std::invalid_argument("tensor data has " + std::to_string(values.size()) +
                                " values for shape " + ShapeString(shape));
  }
  auto node = std::make_shared<internal::Node>();
  node->shape = shape;
  node->value = std::move(values);
  node->requires_grad = requires_grad;
  return FromNode(std::move(node));
}

Tensor Tensor::Scalar(double v, bool requires_grad) {
  return Filled({1, 1}, v, requires_grad);
}

double Tensor::item() const {
  if (size() != 1) {
    throw std::invalid_argument("item() on tensor of shape " + ShapeString(shape()));
  }
  return node_->value[0];
}

std::vector<double> Tensor::grad() const {
  if (node_->grad.empty()) return std::vector<double>(node_->value.size(), 0.0);
  return node_->grad;
}

Tensor Tensor::Detach() const { return FromData(shape(), values(), false); }

void Tensor::Backward() const {
  if (size() != 1) {
    throw std::invalid_argument("Backward() needs a 1 x 1 tensor, got " +
                                ShapeString(shape()));
  }
  // Iterative post-order DFS gives a topological order.
  std::vector<internal::Node*> order;
  std::unordered_set<internal::Node*> seen;
  std::vector<std::pair<internal::Node*, std::size_t>> stack{{node_.get(), 0}};
  seen.insert(node_.get());
  while (!stack.empty()) {
    auto& [n, next] = stack.back();
    if (next < n->parents.size()) {
      internal::Node* p = n->parents[next++].get();
      if (p->requires_grad && seen.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }
  node_->EnsureGrad();
  node_->grad[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    internal::Node* n = *it;
    if (n->backward && !n->grad.empty()) n->backward(*n);
  }
}

bool GradEnabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }

NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

}  // namespace hrdiff
