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

#include "privml/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace privml {

std::string to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kTotalCount: return "tc";
    case ScoreKind::kDifferenceCount: return "dc";
    case ScoreKind::kPurityIndex: return "pi";
    case ScoreKind::kInformationGain: return "ig";
  }
  return "tc";
}

ScoreKind score_kind_from_string(const std::string& name) {
  if (name == "tc") return ScoreKind::kTotalCount;
  if (name == "dc") return ScoreKind::kDifferenceCount;
  if (name == "pi") return ScoreKind::kPurityIndex;
  if (name == "ig") return ScoreKind::kInformationGain;
  throw std::invalid_argument("unknown score kind: " + name);
}

std::vector<FeatureCounts> extract_counts(const SparseDataset& d) {
  std::vector<FeatureCounts> counts(d.num_features);
  std::int64_t label1 = 0;
  for (const Tuple& t : d.tuples) {
    if (t.label == 1) {
      ++label1;
      for (std::uint32_t f : t.active_features) ++counts[f].n11;
    } else {
      for (std::uint32_t f : t.active_features) ++counts[f].n10;
    }
  }
  const std::int64_t label0 = static_cast<std::int64_t>(d.size()) - label1;
  for (FeatureCounts& c : counts) {
    c.n01 = label1 - c.n11;
    c.n00 = label0 - c.n10;
  }
  return counts;
}

double score_tc(const FeatureCounts& c) {
  return static_cast<double>(c.n11 + c.n10);
}

double score_dc(const FeatureCounts& c) {
  return static_cast<double>(std::abs(c.n11 - c.n10));
}

double score_pi(const FeatureCounts& c) {
  return static_cast<double>(
      std::max(std::abs(c.n11 - c.n10), std::abs(c.n01 - c.n00)));
}

namespace {
// -p*ln(p) with the 0*ln(0) = 0 convention.
double nlogn_term(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

// Entropy of the label within a group of `total` tuples, `ones` of them
// labeled 1.
double group_entropy(std::int64_t ones, std::int64_t total) {
  if (total <= 0) return 0.0;
  const double p = static_cast<double>(ones) / static_cast<double>(total);
  return nlogn_term(p) + nlogn_term(1.0 - p);
}
}  // namespace

double score_ig(const FeatureCounts& c) {
  const std::int64_t n = c.total();
  if (n <= 0) {
    throw std::invalid_argument("score_ig: empty dataset");
  }
  const std::int64_t n_f1 = c.n11 + c.n10;
  const std::int64_t n_f0 = c.n01 + c.n00;
  const double h = group_entropy(c.n11 + c.n01, n);
  const double p_f1 = static_cast<double>(n_f1) / static_cast<double>(n);
  const double p_f0 = static_cast<double>(n_f0) / static_cast<double>(n);
  return h - p_f1 * group_entropy(c.n11, n_f1) - p_f0 * group_entropy(c.n01, n_f0);
}

double score(ScoreKind kind, const FeatureCounts& c) {
  switch (kind) {
    case ScoreKind::kTotalCount: return score_tc(c);
    case ScoreKind::kDifferenceCount: return score_dc(c);
    case ScoreKind::kPurityIndex: return score_pi(c);
    case ScoreKind::kInformationGain: return score_ig(c);
  }
  throw std::invalid_argument("score: unknown kind");
}

SensitivityProfile sensitivity_profile(ScoreKind kind, std::size_t s,
                                       std::size_t num_features,
                                       std::size_t n_bound,
                                       NeighborModel model) {
  if (n_bound < 1) {
    throw std::invalid_argument("sensitivity_profile: n_bound must be >= 1");
  }
  SensitivityProfile p{};
  switch (kind) {
    case ScoreKind::kTotalCount:
    case ScoreKind::kDifferenceCount:
      p.per_query = 1.0;
      p.affected_queries = static_cast<std::int64_t>(s);
      break;
    case ScoreKind::kPurityIndex:
      p.per_query = 1.0;
      p.affected_queries = static_cast<std::int64_t>(num_features);
      break;
    case ScoreKind::kInformationGain:
      p.per_query = std::log(static_cast<double>(n_bound)) + 1.0;
      p.affected_queries = static_cast<std::int64_t>(num_features);
      break;
  }
  if (model == NeighborModel::kBounded) {
    // Neighbors of equal size differ in one tuple, touching at most 2s
    // feature columns regardless of the score.
    p.affected_queries = 2 * static_cast<std::int64_t>(s);
  }
  return p;
}

ScoreTable make_score_table(const SparseDataset& d, ScoreKind kind,
                            NeighborModel model, std::int64_t n_bound) {
  ScoreTable t;
  t.kind = kind;
  t.counts = extract_counts(d);
  t.scores.reserve(t.counts.size());
  for (const FeatureCounts& c : t.counts) t.scores.push_back(score(kind, c));
  const std::size_t bound =
      n_bound > 0 ? static_cast<std::size_t>(n_bound) : std::max<std::size_t>(d.size(), 1);
  const SensitivityProfile p =
      sensitivity_profile(kind, d.max_ones_per_tuple, d.num_features, bound, model);
  t.per_query_sensitivity = p.per_query;
  t.affected_queries = p.affected_queries;
  return t;
}

}  // namespace privml
