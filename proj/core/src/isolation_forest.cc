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

#include "hrdiff/isolation_forest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hrdiff/rng.h"

namespace hrdiff {
namespace {

constexpr double kEulerGamma = 0.5772156649015329;

}  // namespace

double AveragePathLength(std::size_t n) {
  if (n <= 1) return 0.0;
  if (n == 2) return 1.0;
  const double m = static_cast<double>(n - 1);
  const double harmonic = std::log(m) + kEulerGamma;
  return 2.0 * harmonic - 2.0 * m / static_cast<double>(n);
}

IsolationForest IsolationForest::Fit(const PointSet& points,
                                     const IsolationForestOptions& options) {
  const std::size_t n = points.size();
  if (n < 2) throw std::invalid_argument("isolation forest needs >= 2 points");
  if (options.num_trees == 0 || options.subsample < 2) {
    throw std::invalid_argument("isolation forest needs trees and subsample >= 2");
  }
  IsolationForest forest;
  forest.dims_ = points.dims;
  forest.sample_size_ = std::min(options.subsample, n);
  const auto height_limit = static_cast<std::size_t>(
      std::ceil(std::log2(static_cast<double>(forest.sample_size_))));

  Rng rng(options.seed);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);

  for (std::size_t t = 0; t < options.num_trees; ++t) {
    // Partial Fisher-Yates draws the sub-sample without replacement.
    for (std::size_t i = 0; i < forest.sample_size_; ++i) {
      std::swap(all[i], all[i + rng.Index(n - i)]);
    }
    std::vector<std::size_t> idx(all.begin(), all.begin() + forest.sample_size_);

    Tree tree;
    struct Work {
      int node;
      std::size_t begin, end, depth;
    };
    tree.push_back({});
    std::vector<Work> stack{{0, 0, idx.size(), 0}};
    while (!stack.empty()) {
      const Work w = stack.back();
      stack.pop_back();
      tree[w.node].size = w.end - w.begin;
      if (w.end - w.begin <= 1 || w.depth >= height_limit) continue;

      // Only features with spread can split; identical points stay a leaf.
      std::vector<int> candidates;
      std::vector<std::pair<double, double>> ranges;
      for (std::size_t f = 0; f < points.dims; ++f) {
        double lo = points.row(idx[w.begin])[f];
        double hi = lo;
        for (std::size_t i = w.begin + 1; i < w.end; ++i) {
          const double v = points.row(idx[i])[f];
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        if (hi > lo) {
          candidates.push_back(static_cast<int>(f));
          ranges.emplace_back(lo, hi);
        }
      }
      if (candidates.empty()) continue;
      const std::size_t pick = rng.Index(candidates.size());
      const int feature = candidates[pick];
      const auto [lo, hi] = ranges[pick];
      double threshold = rng.Uniform(lo, hi);
      if (threshold <= lo) threshold = std::nextafter(lo, hi);

      auto mid = std::partition(
          idx.begin() + static_cast<std::ptrdiff_t>(w.begin),
          idx.begin() + static_cast<std::ptrdiff_t>(w.end),
          [&](std::size_t i) { return points.row(i)[feature] < threshold; });
      const auto split = static_cast<std::size_t>(mid - idx.begin());

      const int left = static_cast<int>(tree.size());
      tree.push_back({});
      const int right = static_cast<int>(tree.size());
      tree.push_back({});
      tree[w.node].feature = feature;
      tree[w.node].threshold = threshold;
      tree[w.node].left = left;
      tree[w.node].right = right;
      stack.push_back({right, split, w.end, w.depth + 1});
      stack.push_back({left, w.begin, split, w.depth + 1});
    }
    forest.trees_.push_back(std::move(tree));
  }
  return forest;
}

double IsolationForest::PathLength(const Tree& tree,
                                   std::span<const double> point) const {
  int node = 0;
  double depth = 0.0;
  while (tree[node].feature >= 0) {
    node = point[tree[node].feature] < tree[node].threshold ? tree[node].left
                                                            : tree[node].right;
    depth += 1.0;
  }
  return depth + AveragePathLength(tree[node].size);
}

double IsolationForest::Score(std::span<const double> point) const {
  if (point.size() != dims_) {
    throw std::invalid_argument("point dimension does not match the forest");
  }
  double total = 0.0;
  for (const auto& tree : trees_) total += PathLength(tree, point);
  const double mean = total / static_cast<double>(trees_.size());
  return std::pow(2.0, -mean / AveragePathLength(sample_size_));
}

std::vector<double> IsolationForest::Score(const PointSet& points) const {
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = Score(points.row(i));
  return out;
}

OutlierReport FlagOutliers(std::span<const double> scores, double contamination) {
  if (!(contamination > 0.0 && contamination < 1.0)) {
    throw std::invalid_argument("contamination must lie in (0, 1)");
  }
  OutlierReport report;
  report.scores.assign(scores.begin(), scores.end());
  if (scores.empty()) return report;
  // Guard against 0.05 * 100 landing a hair above 5 in floating point.
  const double raw = contamination * static_cast<double>(scores.size());
  auto count = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  count = std::clamp<std::size_t>(count, 1, scores.size());

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  report.flagged.assign(order.begin(), order.begin() + count);
  report.threshold = scores[order[count - 1]];
  std::sort(report.flagged.begin(), report.flagged.end());
  return report;
}

}  // namespace hrdiff
