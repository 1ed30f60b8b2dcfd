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

#include "hrdiff/rng.h"

#include <cmath>
#include <numbers>

namespace hrdiff {

std::uint64_t MixSeed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double LaplaceFromUniform(double u, double b) {
  if (u == 0.0 || b == 0.0) return 0.0;
  const double sign = u > 0.0 ? 1.0 : -1.0;
  return -b * sign * std::log(1.0 - 2.0 * std::abs(u));
}

Rng::Rng(std::uint64_t seed) : engine_(MixSeed(seed)) {}

Rng Rng::Derive(std::uint64_t seed, std::uint64_t stream) {
  return Rng(MixSeed(seed) ^ MixSeed(stream + 0x632be59bd9b4e019ULL));
}

Rng Rng::Derive(std::uint64_t seed, std::string_view stream) {
  return Derive(seed, Fnv1a64(stream));
}

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::Index(std::size_t n) {
  // Lemire-style rejection keeps the result exactly uniform.
  const std::uint64_t bound = n;
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return static_cast<std::size_t>(r % bound);
  }
}

double Rng::Normal() {
  // Box-Muller; one value per call keeps the stream position simple.
  double u1 = Uniform();
  while (u1 <= 0.0) u1 = Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::Laplace(double b) {
  if (b == 0.0) return 0.0;
  double u = Uniform() - 0.5;
  while (u == -0.5) u = Uniform() - 0.5;
  return LaplaceFromUniform(u, b);
}

double Rng::Gamma(double shape) {
  if (shape < 1.0) {
    const double u = Uniform();
    return Gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = Normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = Uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

}  // namespace hrdiff
