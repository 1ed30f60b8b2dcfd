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

// Binary parameter checkpoints.
//
// Layout (all integers little-endian):
//   "HRDFCKPT" | u32 version | u64 len + config text |
//   u64 count | count x (u64 len + name | u64 rows | u64 cols | rows*cols f64)
// Doubles are stored as their IEEE-754 bit patterns, so round trips are exact.

#ifndef HRDIFF_CHECKPOINT_H_
#define HRDIFF_CHECKPOINT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "hrdiff/tensor.h"

namespace hrdiff {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct NamedArray {
  std::string name;
  Shape shape;
  std::vector<double> values;
};

struct Checkpoint {
  std::string config;  // serialized model configuration
  std::vector<NamedArray> arrays;
};

void SaveCheckpoint(const std::string& path, const Checkpoint& checkpoint);
// Throws std::runtime_error on I/O failure, bad magic, unknown version or
// truncation.
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace hrdiff

#endif  // HRDIFF_CHECKPOINT_H_
