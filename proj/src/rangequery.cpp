//
// Copyright 2026 The Privml Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "privml/rangequery.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace privml {

namespace {
std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Sums of every aligned block, level by level: sums[0] = leaves,
// sums[l][i] = sum of the 2^l leaves starting at i*2^l.
std::vector<std::vector<double>> block_sums(const std::vector<double>& padded) {
  std::vector<std::vector<double>> sums;
  sums.push_back(padded);
  while (sums.back().size() > 1) {
    const auto& prev = sums.back();
    std::vector<double> next(prev.size() / 2);
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] = prev[2 * i] + prev[2 * i + 1];
    }
    sums.push_back(std::move(next));
  }
  return sums;
}
}  // namespace

HaarCoefficients haar_forward(std::span<const double> counts) {
  HaarCoefficients h;
  const std::size_t m = std::max<std::size_t>(counts.size(), 1);
  h.padded_len = next_power_of_two(m);
  std::vector<double> padded(h.padded_len, 0.0);
  std::copy(counts.begin(), counts.end(), padded.begin());

  const auto sums = block_sums(padded);
  const std::size_t levels = sums.size() - 1;  // log2(padded_len)
  h.base = sums[levels][0] / static_cast<double>(h.padded_len);
  h.details.assign(h.padded_len - 1, 0.0);
  // Heap order: walk nodes top-down; node index within its level gives the
  // block position.
  std::size_t node = 0;
  for (std::size_t depth = 0; depth < levels; ++depth) {
    const std::size_t span = h.padded_len >> depth;   // leaves under the node
    const std::size_t lvl = levels - depth - 1;       // children live here
    const std::size_t count = std::size_t{1} << depth;
    for (std::size_t i = 0; i < count; ++i, ++node) {
      const double left = sums[lvl][2 * i];
      const double right = sums[lvl][2 * i + 1];
      const double half = static_cast<double>(span / 2);
      h.details[node] = (left / half - right / half) / 2.0;
    }
  }
  return h;
}

std::vector<double> haar_inverse(const HaarCoefficients& h) {
  std::vector<double> out(h.padded_len, h.base);
  if (h.padded_len == 1) return out;
  // Each leaf adds +detail under a left child, -detail under a right child,
  // along its root-to-leaf path.
  const std::size_t levels =
      static_cast<std::size_t>(std::log2(static_cast<double>(h.padded_len)) + 0.5);
  for (std::size_t leaf = 0; leaf < h.padded_len; ++leaf) {
    std::size_t node = 0;
    std::size_t lo = 0, hi = h.padded_len;
    for (std::size_t depth = 0; depth < levels; ++depth) {
      const std::size_t mid = lo + (hi - lo) / 2;
      const std::size_t index_in_level = lo >> (levels - depth);
      const std::size_t level_start = (std::size_t{1} << depth) - 1;
      node = level_start + index_in_level;
      if (leaf < mid) {
        out[leaf] += h.details[node];
        hi = mid;
      } else {
        out[leaf] -= h.details[node];
        lo = mid;
      }
    }
  }
  return out;
}

HaarCoefficients privelet_perturb(const HaarCoefficients& h,
                                  const SpendReceipt& receipt, Rng& rng) {
  HaarCoefficients out = h;
  NoiseStream noise(receipt, rng);
  if (noise.noiseless()) return out;
  const double m = static_cast<double>(h.padded_len);
  const double lambda_eps = 1.0 + std::log2(m);  // lambda = this / eps
  out.base += noise.laplace(lambda_eps / m);
  // Heap level of a node determines its span.
  std::size_t node = 0;
  std::size_t count_at_level = 1;
  std::size_t span = h.padded_len;
  while (node < out.details.size()) {
    for (std::size_t i = 0; i < count_at_level && node < out.details.size();
         ++i, ++node) {
      out.details[node] += noise.laplace(lambda_eps / static_cast<double>(span));
    }
    count_at_level <<= 1;
    span >>= 1;
  }
  return out;
}

double one_sided_query(std::span<const double> x, std::size_t j) {
  if (j < 1 || j > x.size()) {
    throw std::invalid_argument("one_sided_query: index out of range");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < j; ++i) sum += x[i];
  return sum;
}

std::vector<double> isotonic_project(std::span<const double> y) {
  // Pool adjacent violators with block merging.
  struct Block {
    double sum;
    std::size_t count;
    double mean() const { return sum / static_cast<double>(count); }
  };
  std::vector<Block> blocks;
  blocks.reserve(y.size());
  for (double v : y) {
    blocks.push_back({v, 1});
    // Merge on strict violation only: monotone input passes through intact.
    while (blocks.size() > 1 &&
           blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
      blocks[blocks.size() - 2].sum += blocks.back().sum;
      blocks[blocks.size() - 2].count += blocks.back().count;
      blocks.pop_back();
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (const Block& b : blocks) {
    const double v = std::clamp(b.mean(), 0.0, 1.0);
    out.insert(out.end(), b.count, v);
  }
  return out;
}

}  // namespace privml
