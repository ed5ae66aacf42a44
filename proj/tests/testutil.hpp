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

// Shared test helpers: dataset generators, independent oracles, and the
// Monte-Carlo differential-privacy ratio harness. Everything here stays
// independent of the implementation paths it is used to check.

#ifndef PRIVML_TESTS_TESTUTIL_HPP
#define PRIVML_TESTS_TESTUTIL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "privml/classifier.hpp"
#include "privml/dataset.hpp"
#include "privml/dp.hpp"

namespace privml::testing {

// Small random dataset with independent feature activations.
inline SparseDataset random_dataset(std::size_t num_tuples,
                                    std::size_t num_features,
                                    double density, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x7e57));
  SparseDataset d;
  d.num_features = num_features;
  for (std::size_t i = 0; i < num_tuples; ++i) {
    Tuple t;
    t.label = rng.uniform01() < 0.5 ? 0 : 1;
    for (std::size_t f = 0; f < num_features; ++f) {
      if (rng.uniform01() < density) {
        t.active_features.push_back(static_cast<std::uint32_t>(f));
      }
    }
    d.max_ones_per_tuple = std::max(d.max_ones_per_tuple, t.active_features.size());
    d.tuples.push_back(std::move(t));
  }
  d.max_ones_per_tuple = std::max<std::size_t>(d.max_ones_per_tuple, 1);
  return d;
}

inline PredictionSet random_predictions(std::size_t n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x99ed));
  PredictionSet ps;
  for (std::size_t i = 0; i < n; ++i) {
    ps.items.push_back({rng.uniform01() < 0.5 ? 0 : 1, rng.uniform01()});
  }
  return ps;
}

// Pairwise-comparison AUC: P(p_pos > p_neg) with ties counted half.
inline double mann_whitney_auc(const PredictionSet& ps) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (const auto& a : ps.items) {
    if (a.label != 1) continue;
    for (const auto& b : ps.items) {
      if (b.label != 0) continue;
      ++pairs;
      if (a.p > b.p) wins += 1.0;
      else if (a.p == b.p) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

// Exact projection onto non-decreasing sequences by exhausting contiguous
// block partitions (2^(n-1) of them), then clamping to [0,1]. Independent of
// the pool-adjacent-violators route.
inline std::vector<double> brute_force_isotonic(const std::vector<double>& y) {
  const std::size_t n = y.size();
  std::vector<double> best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::uint64_t cuts = 0; cuts < (1ULL << (n - 1)); ++cuts) {
    std::vector<double> candidate;
    candidate.reserve(n);
    double prev_mean = -std::numeric_limits<double>::infinity();
    bool feasible = true;
    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool boundary = i + 1 == n || (cuts >> i) & 1;
      if (!boundary) continue;
      double sum = 0.0;
      for (std::size_t j = start; j <= i; ++j) sum += y[j];
      const double mean = sum / static_cast<double>(i - start + 1);
      if (mean < prev_mean) {
        feasible = false;
        break;
      }
      candidate.insert(candidate.end(), i - start + 1, mean);
      prev_mean = mean;
      start = i + 1;
    }
    if (!feasible) continue;
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cost += (candidate[i] - y[i]) * (candidate[i] - y[i]);
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = candidate;
    }
  }
  for (double& v : best) v = std::clamp(v, 0.0, 1.0);
  return best;
}

// Direct evaluation of the smooth-sensitivity maximization for the lower
// median, written independently of the library routine.
inline double brute_force_smooth_median(std::vector<double> points, double beta,
                                        double lo, double hi) {
  std::sort(points.begin(), points.end());
  const std::int64_t n = static_cast<std::int64_t>(points.size());
  if (n == 0) return hi - lo;
  const auto value = [&](std::int64_t i) {
    if (i < 0) return lo;
    if (i >= n) return hi;
    return points[static_cast<std::size_t>(i)];
  };
  const std::int64_t m = (n - 1) / 2;
  double best = 0.0;
  for (std::int64_t k = 0; k <= n; ++k) {
    for (std::int64_t t = 0; t <= k + 1; ++t) {
      const double width = value(m + t) - value(m + t - k - 1);
      best = std::max(best, std::exp(-beta * static_cast<double>(k)) * width);
    }
  }
  return best;
}

struct McDpResult {
  double max_ratio = 0.0;  // worst (count+1)/(count'+1) over bins, both ways
  std::size_t bins = 0;
};

// Monte-Carlo differential-privacy check: runs the mechanism N times on two
// neighboring inputs, bins the outputs with the caller's key function, and
// reports the worst smoothed frequency ratio. A mechanism satisfying
// eps-DP keeps the ratio near exp(eps); the caller allows sampling slack.
template <typename MechanismA, typename MechanismB>
McDpResult mc_dp_check(MechanismA&& run_d, MechanismB&& run_d_prime,
                       std::size_t trials, std::uint64_t seed) {
  std::map<std::uint64_t, std::pair<std::size_t, std::size_t>> bins;
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng_a(derive_seed(seed, 0xa, i));
    bins[run_d(rng_a)].first += 1;
    Rng rng_b(derive_seed(seed, 0xb, i));
    bins[run_d_prime(rng_b)].second += 1;
  }
  McDpResult result;
  result.bins = bins.size();
  for (const auto& [key, counts] : bins) {
    const double a = static_cast<double>(counts.first) + 1.0;
    const double b = static_cast<double>(counts.second) + 1.0;
    result.max_ratio = std::max({result.max_ratio, a / b, b / a});
  }
  return result;
}

}  // namespace privml::testing

#endif  // PRIVML_TESTS_TESTUTIL_HPP
