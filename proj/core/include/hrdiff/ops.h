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

// Differentiable primitives. Every op checks shapes and throws
// std::invalid_argument naming both operands' shapes on mismatch.

#ifndef HRDIFF_OPS_H_
#define HRDIFF_OPS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "hrdiff/rng.h"
#include "hrdiff/tensor.h"

namespace hrdiff {

// [m x k] * [k x n]
Tensor MatMul(const Tensor& a, const Tensor& b);
Tensor Transpose(const Tensor& a);

Tensor Add(const Tensor& a, const Tensor& b);
Tensor Sub(const Tensor& a, const Tensor& b);
Tensor Mul(const Tensor& a, const Tensor& b);
Tensor Scale(const Tensor& a, double k);

// a + row, row being 1 x cols(a), added to every row.
Tensor AddRow(const Tensor& a, const Tensor& row);
// a * row elementwise per row.
Tensor MulRow(const Tensor& a, const Tensor& row);
// s * a and a + s for a 1 x 1 tensor s.
Tensor MulScalar(const Tensor& a, const Tensor& s);
Tensor AddScalar(const Tensor& a, const Tensor& s);

// x W + b with W [in x out], b [1 x out] (b may be undefined).
Tensor Linear(const Tensor& x, const Tensor& w, const Tensor& b);

// Row softmax. With `causal`, entry (i, j) is masked for j > i.
Tensor SoftmaxRows(const Tensor& a, bool causal = false);

// Per-row normalisation to zero mean and unit (population) variance.
Tensor LayerNormRows(const Tensor& a, double eps = 1e-5);

// Inverted dropout: kept entries are scaled by 1 / (1 - rate).
Tensor Dropout(const Tensor& a, double rate, Rng& rng, bool training);

// x * Phi(x) with the exact normal CDF.
Tensor Gelu(const Tensor& a);

enum class ConvPadding {
  kCircular,  // centred taps, indices wrap within the segment
  kCausal,    // taps at t-K+1 .. t, zero padding on the left
};

// 1-D convolution over the row (time) axis of x [T x Cin], applied
// independently to consecutive segments of `segment` rows. Weights are
// [K*Cin x Cout] with row k*Cin + c holding tap k of input channel c; tap 0 is
// the leftmost. bias is [1 x Cout] or undefined.
Tensor Conv1d(const Tensor& x, const Tensor& w, const Tensor& bias,
              std::size_t kernel, std::size_t segment, ConvPadding padding);

// Rows of `table` selected by ids; throws std::out_of_range on a bad id.
Tensor Embedding(const Tensor& table, std::span<const std::size_t> ids);

Tensor ConcatRows(std::span<const Tensor> parts);
Tensor ConcatCols(std::span<const Tensor> parts);
Tensor SliceRows(const Tensor& a, std::size_t begin, std::size_t count);
Tensor SliceCols(const Tensor& a, std::size_t begin, std::size_t count);

Tensor Abs(const Tensor& a);
Tensor Sum(const Tensor& a);
Tensor Mean(const Tensor& a);

// Mean absolute error between equally shaped tensors.
Tensor L1Loss(const Tensor& pred, const Tensor& target);
// Mean Huber loss: r^2/2 for |r| <= delta, delta (|r| - delta/2) otherwise.
Tensor HuberLoss(const Tensor& pred, const Tensor& target, double delta);

}  // namespace hrdiff

#endif  // HRDIFF_OPS_H_
