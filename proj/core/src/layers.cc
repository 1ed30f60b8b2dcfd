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

#include "hrdiff/layers.h"

#include <cmath>
#include <stdexcept>

namespace hrdiff {

Tensor ParameterStore::Add(const std::string& name, Shape shape, Init init) {
  for (const auto& [n, t] : params_) {
    if (n == name) throw std::logic_error("parameter registered twice: " + name);
  }
  std::vector<double> values(shape.size(), 0.0);
  switch (init.kind) {
    case Init::Kind::kZeros:
      break;
    case Init::Kind::kConstant:
      std::fill(values.begin(), values.end(), init.value);
      break;
    case Init::Kind::kXavierUniform: {
      const double bound =
          std::sqrt(6.0 / static_cast<double>(shape.rows + shape.cols));
      for (double& v : values) v = rng_.Uniform(-bound, bound);
      break;
    }
    case Init::Kind::kNormal:
      for (double& v : values) v = init.value * rng_.Normal();
      break;
  }
  Tensor t = Tensor::FromData(shape, std::move(values), true);
  params_.emplace_back(name, t);
  return t;
}

std::vector<Tensor> ParameterStore::tensors() const {
  std::vector<Tensor> out;
  out.reserve(params_.size());
  for (const auto& [n, t] : params_) out.push_back(t);
  return out;
}

std::size_t ParameterStore::ParameterCount() const {
  std::size_t n = 0;
  for (const auto& [name, t] : params_) n += t.size();
  return n;
}

Tensor ParameterStore::Find(const std::string& name) const {
  for (const auto& [n, t] : params_) {
    if (n == name) return t;
  }
  throw std::out_of_range("no parameter named " + name);
}

std::vector<NamedArray> ParameterStore::Export() const {
  std::vector<NamedArray> out;
  out.reserve(params_.size());
  for (const auto& [n, t] : params_) out.push_back({n, t.shape(), t.values()});
  return out;
}

void ParameterStore::Import(const std::vector<NamedArray>& arrays) {
  if (arrays.size() != params_.size()) {
    throw std::runtime_error("checkpoint has " + std::to_string(arrays.size()) +
                             " arrays, model has " + std::to_string(params_.size()));
  }
  for (std::size_t k = 0; k < arrays.size(); ++k) {
    auto& [name, t] = params_[k];
    if (arrays[k].name != name || arrays[k].shape != t.shape()) {
      throw std::runtime_error("checkpoint array " + arrays[k].name + " " +
                               ShapeString(arrays[k].shape) + " does not match " +
                               name + " " + ShapeString(t.shape()));
    }
  }
  for (std::size_t k = 0; k < arrays.size(); ++k) {
    params_[k].second.mutable_values() = arrays[k].values;
  }
}

void ParameterStore::ZeroGrad() {
  for (auto& [n, t] : params_) t.ZeroGrad();
}

Tensor ForwardContext::Drop(const Tensor& x) const {
  if (!training || dropout == 0.0) return x;
  if (rng == nullptr) throw std::logic_error("dropout in training needs an rng");
  return Dropout(x, dropout, *rng, true);
}

LinearLayer::LinearLayer(ParameterStore& store, const std::string& name,
                         std::size_t in, std::size_t out, bool bias) {
  w_ = store.Add(name + ".weight", {in, out}, Init::XavierUniform());
  if (bias) b_ = store.Add(name + ".bias", {1, out}, Init::Zeros());
}

LayerNormLayer::LayerNormLayer(ParameterStore& store, const std::string& name,
                               std::size_t dim) {
  gamma_ = store.Add(name + ".gamma", {1, dim}, Init::Constant(1.0));
  beta_ = store.Add(name + ".beta", {1, dim}, Init::Zeros());
}

Tensor LayerNormLayer::operator()(const Tensor& x) const {
  return AddRow(MulRow(LayerNormRows(x), gamma_), beta_);
}

MultiHeadAttention::MultiHeadAttention(ParameterStore& store, const std::string& name,
                                       std::size_t d_model, std::size_t heads)
    : d_model_(d_model), heads_(heads) {
  if (heads == 0 || d_model % heads != 0) {
    throw std::invalid_argument("d_model " + std::to_string(d_model) +
                                " is not divisible by " + std::to_string(heads) +
                                " heads");
  }
  q_ = LinearLayer(store, name + ".q", d_model, d_model);
  k_ = LinearLayer(store, name + ".k", d_model, d_model);
  v_ = LinearLayer(store, name + ".v", d_model, d_model);
  o_ = LinearLayer(store, name + ".o", d_model, d_model);
}

Tensor MultiHeadAttention::operator()(const Tensor& query, const Tensor& memory,
                                      bool causal) const {
  if (query.cols() != d_model_ || memory.cols() != d_model_) {
    throw std::invalid_argument("attention: shapes " + ShapeString(query.shape()) +
                                " and " + ShapeString(memory.shape()) +
                                " do not match d_model " + std::to_string(d_model_));
  }
  if (causal && query.rows() != memory.rows()) {
    throw std::invalid_argument("causal attention needs equal lengths, got " +
                                ShapeString(query.shape()) + " and " +
                                ShapeString(memory.shape()));
  }
  const Tensor q = q_(query);
  const Tensor k = k_(memory);
  const Tensor v = v_(memory);
  const std::size_t dh = d_model_ / heads_;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d_model_));
  std::vector<Tensor> heads;
  heads.reserve(heads_);
  for (std::size_t h = 0; h < heads_; ++h) {
    const Tensor qh = SliceCols(q, h * dh, dh);
    const Tensor kh = SliceCols(k, h * dh, dh);
    const Tensor vh = SliceCols(v, h * dh, dh);
    const Tensor scores = Scale(MatMul(qh, Transpose(kh)), scale);
    heads.push_back(MatMul(SoftmaxRows(scores, causal), vh));
  }
  return o_(heads_ == 1 ? heads[0] : ConcatCols(heads));
}

FeedForward::FeedForward(ParameterStore& store, const std::string& name,
                         std::size_t d_model, std::size_t hidden)
    : in_(store, name + ".in", d_model, hidden), out_(store, name + ".out", hidden, d_model) {}

EncoderLayer::EncoderLayer(ParameterStore& store, const std::string& name,
                           std::size_t d_model, std::size_t heads, std::size_t ff_dim)
    : attn_(store, name + ".attn", d_model, heads),
      ff_(store, name + ".ff", d_model, ff_dim),
      norm1_(store, name + ".norm1", d_model),
      norm2_(store, name + ".norm2", d_model) {}

Tensor EncoderLayer::operator()(const Tensor& x, const ForwardContext& ctx) const {
  const Tensor a = norm1_(Add(x, ctx.Drop(attn_(x, x, false))));
  return norm2_(Add(a, ctx.Drop(ff_(a))));
}

DecoderLayer::DecoderLayer(ParameterStore& store, const std::string& name,
                           std::size_t d_model, std::size_t heads, std::size_t ff_dim)
    : self_attn_(store, name + ".self_attn", d_model, heads),
      cross_attn_(store, name + ".cross_attn", d_model, heads),
      ff_(store, name + ".ff", d_model, ff_dim),
      norm1_(store, name + ".norm1", d_model),
      norm2_(store, name + ".norm2", d_model),
      norm3_(store, name + ".norm3", d_model) {}

Tensor DecoderLayer::operator()(const Tensor& x, const Tensor& context,
                                const ForwardContext& ctx) const {
  const Tensor a = norm1_(Add(x, ctx.Drop(self_attn_(x, x, true))));
  const Tensor b = norm2_(Add(a, ctx.Drop(cross_attn_(a, context, false))));
  return norm3_(Add(b, ctx.Drop(ff_(b))));
}

ScaledEmbedding::ScaledEmbedding(ParameterStore& store, const std::string& name,
                                 std::size_t vocab, std::size_t dim) {
  table_ = store.Add(name + ".table", {vocab, dim}, Init::Normal(1.0));
  alpha_ = store.Add(name + ".alpha", {1, 1}, Init::Constant(1.0));
  beta_ = store.Add(name + ".beta", {1, 1}, Init::Zeros());
}

Tensor ScaledEmbedding::operator()(std::span<const std::size_t> ids) const {
  return AddScalar(MulScalar(Embedding(table_, ids), alpha_), beta_);
}

Tensor SinusoidalTable(std::size_t rows, std::size_t dim) {
  std::vector<double> v(rows * dim);
  for (std::size_t r = 0; r < rows; ++r) {
    const Tensor row = SinusoidalRow(static_cast<double>(r), dim);
    std::copy(row.values().begin(), row.values().end(),
              v.begin() + static_cast<std::ptrdiff_t>(r * dim));
  }
  return Tensor::FromData({rows, dim}, std::move(v));
}

Tensor SinusoidalRow(double position, std::size_t dim) {
  std::vector<double> v(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const double i2 = static_cast<double>(j - j % 2);
    const double freq = std::pow(10000.0, -i2 / static_cast<double>(dim));
    v[j] = j % 2 == 0 ? std::sin(position * freq) : std::cos(position * freq);
  }
  return Tensor::FromData({1, dim}, std::move(v));
}

}  // namespace hrdiff
