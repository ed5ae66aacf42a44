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

#ifndef PRIVML_SCORING_HPP
#define PRIVML_SCORING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "privml/dataset.hpp"

namespace privml {

enum class ScoreKind { kTotalCount, kDifferenceCount, kPurityIndex, kInformationGain };

enum class NeighborModel { kUnbounded, kBounded };

std::string to_string(ScoreKind kind);
ScoreKind score_kind_from_string(const std::string& name);

// Per-feature contingency counts against the binary label.
struct FeatureCounts {
  std::int64_t n11 = 0;  // F=1, L=1
  std::int64_t n10 = 0;  // F=1, L=0
  std::int64_t n01 = 0;  // F=0, L=1
  std::int64_t n00 = 0;  // F=0, L=0

  std::int64_t total() const { return n11 + n10 + n01 + n00; }
};

// Exact counts for every feature in one pass over the tuples.
std::vector<FeatureCounts> extract_counts(const SparseDataset& d);

// Total count: how often the feature takes the value 1.
double score_tc(const FeatureCounts& c);

// Difference count: |n11 - n10|; large when one label dominates for F=1.
double score_dc(const FeatureCounts& c);

// Purity index: the difference count taken over both feature values.
double score_pi(const FeatureCounts& c);

// Information gain with natural-log entropy; empty-probability terms follow
// the 0*ln(0) = 0 convention. Requires a nonempty dataset behind the counts.
double score_ig(const FeatureCounts& c);

double score(ScoreKind kind, const FeatureCounts& c);

struct SensitivityProfile {
  double per_query;             // S(Q): max change of one feature's score
  std::int64_t affected_queries;  // Delta(Q): how many scores one tuple touches
};

// The (S, Delta) pair that calibrates score-perturbation noise. s is the
// sparsity cap; n_bound an a-priori public bound on the dataset size (only
// information gain uses it, as ln(n)+1, a conservative stand-in for its
// O(log n) sensitivity). Under the bounded neighbor model Delta becomes 2s
// for every kind.
SensitivityProfile sensitivity_profile(ScoreKind kind, std::size_t s,
                                       std::size_t num_features,
                                       std::size_t n_bound,
                                       NeighborModel model);

// Scores plus the sensitivity metadata the selection mechanisms need.
struct ScoreTable {
  ScoreKind kind = ScoreKind::kTotalCount;
  std::vector<FeatureCounts> counts;
  std::vector<double> scores;
  double per_query_sensitivity = 1.0;
  std::int64_t affected_queries = 1;

  std::size_t num_features() const { return scores.size(); }
};

// Builds the table from the dataset as supplied; if the dataset was feature
// sampled, its sparsity bound (and hence Delta) is already the sampling rate.
// n_bound <= 0 means "use the dataset size".
ScoreTable make_score_table(const SparseDataset& d, ScoreKind kind,
                            NeighborModel model = NeighborModel::kUnbounded,
                            std::int64_t n_bound = 0);

}  // namespace privml

#endif  // PRIVML_SCORING_HPP
