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

#ifndef HRDIFF_RNG_H_
#define HRDIFF_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace hrdiff {

// Deterministic random stream. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the distributions below are implemented
// here rather than through <random> because the standard library's
// distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent stream derived from (seed, stream id).
  static Rng Derive(std::uint64_t seed, std::uint64_t stream);
  static Rng Derive(std::uint64_t seed, std::string_view stream);

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1).
  double Uniform();
  // Uniform in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, n). n must be > 0.
  std::size_t Index(std::size_t n);
  double Normal();
  // Laplace(0, b) by inverse-CDF sampling.
  double Laplace(double b);
  // Gamma(shape, 1) via Marsaglia-Tsang.
  double Gamma(double shape);
  bool Bernoulli(double p) { return Uniform() < p; }

  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[Index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer, used to decorrelate derived seeds.
std::uint64_t MixSeed(std::uint64_t x);

// 64-bit FNV-1a.
std::uint64_t Fnv1a64(std::string_view bytes);

// Inverse-CDF Laplace transform of u in (-1/2, 1/2):
// x = -b * sign(u) * ln(1 - 2|u|).
double LaplaceFromUniform(double u, double b);

}  // namespace hrdiff

#endif  // HRDIFF_RNG_H_
