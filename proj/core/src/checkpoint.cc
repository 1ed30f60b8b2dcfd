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

#include "hrdiff/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace hrdiff {
namespace {

constexpr char kMagic[8] = {'H', 'R', 'D', 'F', 'C', 'K', 'P', 'T'};
// Guards against allocating absurd sizes from a corrupt file.
constexpr std::uint64_t kMaxLength = std::uint64_t{1} << 32;

void PutU64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

std::uint64_t GetU64(std::istream& in, const std::string& path) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) {
    throw std::runtime_error(path + ": truncated checkpoint");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{buf[i]} << (8 * i);
  return v;
}

void PutString(std::ostream& out, const std::string& s) {
  PutU64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string GetString(std::istream& in, const std::string& path) {
  const std::uint64_t n = GetU64(in, path);
  if (n > kMaxLength) throw std::runtime_error(path + ": corrupt string length");
  std::string s(n, '\0');
  if (!in.read(s.data(), static_cast<std::streamsize>(n))) {
    throw std::runtime_error(path + ": truncated checkpoint");
  }
  return s;
}

}  // namespace

void SaveCheckpoint(const std::string& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic, sizeof(kMagic));
  const std::uint32_t version = kCheckpointVersion;
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((version >> (8 * i)) & 0xff));
  PutString(out, checkpoint.config);
  PutU64(out, checkpoint.arrays.size());
  for (const auto& a : checkpoint.arrays) {
    if (a.values.size() != a.shape.size()) {
      throw std::invalid_argument("checkpoint array " + a.name + " has " +
                                  std::to_string(a.values.size()) +
                                  " values for shape " + ShapeString(a.shape));
    }
    PutString(out, a.name);
    PutU64(out, a.shape.rows);
    PutU64(out, a.shape.cols);
    for (double v : a.values) PutU64(out, std::bit_cast<std::uint64_t>(v));
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw std::runtime_error(path + ": not an hrdiff checkpoint");
  }
  unsigned char vb[4];
  if (!in.read(reinterpret_cast<char*>(vb), 4)) {
    throw std::runtime_error(path + ": truncated checkpoint");
  }
  const std::uint32_t version = vb[0] | (vb[1] << 8) | (vb[2] << 16) |
                                (static_cast<std::uint32_t>(vb[3]) << 24);
  if (version != kCheckpointVersion) {
    throw std::runtime_error(path + ": unsupported checkpoint version " +
                             std::to_string(version));
  }
  Checkpoint ckpt;
  ckpt.config = GetString(in, path);
  const std::uint64_t count = GetU64(in, path);
  if (count > kMaxLength) throw std::runtime_error(path + ": corrupt array count");
  for (std::uint64_t k = 0; k < count; ++k) {
    NamedArray a;
    a.name = GetString(in, path);
    a.shape.rows = GetU64(in, path);
    a.shape.cols = GetU64(in, path);
    if (a.shape.rows > kMaxLength || a.shape.cols > kMaxLength ||
        a.shape.size() > kMaxLength) {
      throw std::runtime_error(path + ": corrupt shape for " + a.name);
    }
    a.values.resize(a.shape.size());
    for (double& v : a.values) v = std::bit_cast<double>(GetU64(in, path));
    ckpt.arrays.push_back(std::move(a));
  }
  return ckpt;
}

}  // namespace hrdiff
