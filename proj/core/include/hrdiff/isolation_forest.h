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

// Classic isolation forest (random axis-parallel splits on sub-samples).

#ifndef HRDIFF_ISOLATION_FOREST_H_
#define HRDIFF_ISOLATION_FOREST_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hrdiff {

// Row-major n x d matrix of points.
struct PointSet {
  std::size_t dims = 0;
  std::vector<double> values;

  std::size_t size() const { return dims == 0 ? 0 : values.size() / dims; }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * dims, dims};
  }
};

struct IsolationForestOptions {
  std::size_t num_trees = 100;
  std::size_t subsample = 256;
  std::uint64_t seed = 0;
};

// Average path length of an unsuccessful BST search over n points, used to
// normalise path lengths: c(n) = 2 H(n - 1) - 2 (n - 1) / n.
double AveragePathLength(std::size_t n);

class IsolationForest {
 public:
  // Requires at least 2 points. Deterministic in (points, options).
  static IsolationForest Fit(const PointSet& points,
                             const IsolationForestOptions& options = {});

  // s(x) = 2^(-E[h(x)] / c(psi)), in (0, 1]; higher is more anomalous.
  double Score(std::span<const double> point) const;
  std::vector<double> Score(const PointSet& points) const;

  std::size_t num_trees() const { return trees_.size(); }
  std::size_t sample_size() const { return sample_size_; }

 private:
  struct Node {
    // Leaf when feature < 0.
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::size_t size = 0;
  };
  using Tree = std::vector<Node>;

  double PathLength(const Tree& tree, std::span<const double> point) const;

  std::size_t dims_ = 0;
  std::size_t sample_size_ = 0;
  std::vector<Tree> trees_;
};

struct OutlierReport {
  std::vector<std::size_t> flagged;  // ascending indices
  std::vector<double> scores;
  double threshold = 0.0;  // lowest flagged score
};

// Flags the ceil(contamination * n) highest scores. Ties are broken toward
// the lower index. contamination must lie in (0, 1).
OutlierReport FlagOutliers(std::span<const double> scores, double contamination);

}  // namespace hrdiff

#endif  // HRDIFF_ISOLATION_FOREST_H_
