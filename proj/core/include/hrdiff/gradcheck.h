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

#ifndef HRDIFF_GRADCHECK_H_
#define HRDIFF_GRADCHECK_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "hrdiff/tensor.h"

namespace hrdiff {

struct GradCheckOptions {
  double step = 1e-5;
  // 0 checks every coordinate; otherwise this many, drawn uniformly.
  std::size_t max_coordinates = 0;
  std::uint64_t seed = 0;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t coordinates = 0;
  // Location of the worst coordinate.
  std::size_t worst_param = 0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Compares reverse-mode gradients of the scalar f() with central differences,
// using |a - b| / max(1, |a|, |b|) per coordinate. f must rebuild its graph
// from `params` on every call. Throws std::domain_error on non-finite values.
GradCheckResult GradientCheck(const std::function<Tensor()>& f,
                              std::vector<Tensor> params,
                              const GradCheckOptions& options = {});

}  // namespace hrdiff

#endif  // HRDIFF_GRADCHECK_H_
