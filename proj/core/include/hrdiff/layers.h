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

// Parameter registry and the transformer building blocks.

#ifndef HRDIFF_LAYERS_H_
#define HRDIFF_LAYERS_H_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hrdiff/checkpoint.h"
#include "hrdiff/ops.h"
#include "hrdiff/rng.h"
#include "hrdiff/tensor.h"

namespace hrdiff {

struct Init {
  enum class Kind { kZeros, kConstant, kXavierUniform, kNormal };
  Kind kind = Kind::kZeros;
  double value = 0.0;  // constant value or normal std

  static Init Zeros() { return {Kind::kZeros, 0.0}; }
  static Init Constant(double v) { return {Kind::kConstant, v}; }
  static Init XavierUniform() { return {Kind::kXavierUniform, 0.0}; }
  static Init Normal(double stddev) { return {Kind::kNormal, stddev}; }
};

// Owns every trainable tensor of a model, in registration order.
class ParameterStore {
 public:
  explicit ParameterStore(std::uint64_t seed) : rng_(seed) {}

  // Registers a new trainable tensor; a repeated name throws.
  Tensor Add(const std::string& name, Shape shape, Init init);

  const std::vector<std::pair<std::string, Tensor>>& named() const { return params_; }
  std::vector<Tensor> tensors() const;
  std::size_t ParameterCount() const;
  // Throws std::out_of_range for an unknown name.
  Tensor Find(const std::string& name) const;

  std::vector<NamedArray> Export() const;
  // Names and shapes must match exactly; throws std::runtime_error otherwise.
  void Import(const std::vector<NamedArray>& arrays);

  void ZeroGrad();

 private:
  Rng rng_;
  std::vector<std::pair<std::string, Tensor>> params_;
};

// Per-call settings for layers with train-time behaviour.
struct ForwardContext {
  bool training = false;
  double dropout = 0.0;
  Rng* rng = nullptr;  // required when training with dropout > 0

  Tensor Drop(const Tensor& x) const;
};

class LinearLayer {
 public:
  LinearLayer() = default;
  LinearLayer(ParameterStore& store, const std::string& name, std::size_t in,
              std::size_t out, bool bias = true);
  Tensor operator()(const Tensor& x) const { return Linear(x, w_, b_); }
  const Tensor& weight() const { return w_; }
  const Tensor& bias() const { return b_; }

 private:
  Tensor w_;
  Tensor b_;
};

class LayerNormLayer {
 public:
  LayerNormLayer() = default;
  LayerNormLayer(ParameterStore& store, const std::string& name, std::size_t dim);
  Tensor operator()(const Tensor& x) const;

 private:
  Tensor gamma_;
  Tensor beta_;
};

// Multi-head attention with scores scaled by 1/sqrt(d_model).
class MultiHeadAttention {
 public:
  MultiHeadAttention() = default;
  MultiHeadAttention(ParameterStore& store, const std::string& name,
                     std::size_t d_model, std::size_t heads);
  // query [n x d], memory [m x d] -> [n x d]. `causal` needs n == m.
  Tensor operator()(const Tensor& query, const Tensor& memory, bool causal) const;

 private:
  std::size_t d_model_ = 0;
  std::size_t heads_ = 0;
  LinearLayer q_, k_, v_, o_;
};

class FeedForward {
 public:
  FeedForward() = default;
  FeedForward(ParameterStore& store, const std::string& name, std::size_t d_model,
              std::size_t hidden);
  Tensor operator()(const Tensor& x) const { return out_(Gelu(in_(x))); }

 private:
  LinearLayer in_, out_;
};

// Post-norm encoder layer: self-attention and feed-forward, each followed by
// a residual add and layer norm.
class EncoderLayer {
 public:
  EncoderLayer() = default;
  EncoderLayer(ParameterStore& store, const std::string& name, std::size_t d_model,
               std::size_t heads, std::size_t ff_dim);
  Tensor operator()(const Tensor& x, const ForwardContext& ctx) const;

 private:
  MultiHeadAttention attn_;
  FeedForward ff_;
  LayerNormLayer norm1_, norm2_;
};

// Post-norm decoder layer: causal self-attention, cross-attention over the
// encoder context, feed-forward.
class DecoderLayer {
 public:
  DecoderLayer() = default;
  DecoderLayer(ParameterStore& store, const std::string& name, std::size_t d_model,
               std::size_t heads, std::size_t ff_dim);
  Tensor operator()(const Tensor& x, const Tensor& context,
                    const ForwardContext& ctx) const;

 private:
  MultiHeadAttention self_attn_, cross_attn_;
  FeedForward ff_;
  LayerNormLayer norm1_, norm2_, norm3_;
};

// alpha * table[id] + beta with learnable scalars alpha (init 1) and beta
// (init 0).
class ScaledEmbedding {
 public:
  ScaledEmbedding() = default;
  ScaledEmbedding(ParameterStore& store, const std::string& name, std::size_t vocab,
                  std::size_t dim);
  Tensor operator()(std::span<const std::size_t> ids) const;
  const Tensor& table() const { return table_; }
  const Tensor& alpha() const { return alpha_; }
  const Tensor& beta() const { return beta_; }

 private:
  Tensor table_, alpha_, beta_;
};

// Fixed sinusoidal table [rows x dim]: sin at even columns, cos at odd
// columns, frequency 1 / 10000^(2i/dim).
Tensor SinusoidalTable(std::size_t rows, std::size_t dim);

// Sinusoidal encoding of a scalar position as a 1 x dim row.
Tensor SinusoidalRow(double position, std::size_t dim);

}  // namespace hrdiff

#endif  // HRDIFF_LAYERS_H_
