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

#ifndef PRIVML_SELECTION_HPP
#define PRIVML_SELECTION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "privml/dp.hpp"
#include "privml/scoring.hpp"

namespace privml {

// Which features survived a selection pass.
struct SelectionMask {
  std::vector<bool> selected;
  std::string method;
  double epsilon_used = 0.0;

  std::size_t count() const;
  static SelectionMask all(std::size_t num_features);
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct ClusterState {
  std::vector<Point2> centers;
  std::vector<std::size_t> assignments;  // per point, a center id
  std::size_t rounds = 0;
};

// Laplace-perturbs every score at scale S(Q)*Delta(Q)/eps and keeps those
// whose noisy score reaches tau.
SelectionMask select_score_perturbation(const ScoreTable& t, double tau,
                                        double eps, PrivacyBudget& budget,
                                        Rng& rng);

// Same perturbation, but keeps the k highest noisy scores. Ties break toward
// the lower feature index.
SelectionMask select_topk_perturbation(const ScoreTable& t, std::size_t k,
                                       double eps, PrivacyBudget& budget,
                                       Rng& rng);

// Private threshold testing: one noisy threshold, unperturbed scores. The
// noise scale is 2*S(Q)/eps so that eps is the actual privacy level; with
// monotone_hint (total-count scores only) the stronger single-sided analysis
// applies and the scale drops to S(Q)/eps.
SelectionMask select_ptt(const ScoreTable& t, double tau, double eps,
                         bool monotone_hint, PrivacyBudget& budget, Rng& rng);

// Comparator that noises both the threshold and every score (half the budget
// each, so all draws sit at scale 2*S(Q)/eps).
SelectionMask select_noisycut(const ScoreTable& t, double tau, double eps,
                              PrivacyBudget& budget, Rng& rng);

// Iterative private k-means over 2-D points: each round releases noisy
// cluster sizes (sensitivity 1) and noisy coordinate sums (sensitivity
// point_l1_bound), splitting the per-round budget evenly between the two.
// Initialization is data independent: centers spread along the diagonal of
// the public L1 ball of radius init_bound (point_l1_bound when zero). Empty
// clusters keep their previous center; noisy sizes below 1 are floored at 1
// for the division.
ClusterState private_kmeans(const std::vector<Point2>& points, std::size_t k,
                            std::size_t rounds, double eps,
                            double point_l1_bound, PrivacyBudget& budget,
                            Rng& rng, double init_bound = 0.0);

// Embeds features as (n10, n11) count points, clusters them privately, and
// accepts whole clusters by scoring their centers against tau (no extra
// noise: centers are already private). Total-count and difference-count
// scores only, read off the center coordinates as x+y and |y-x|.
SelectionMask select_cluster(const ScoreTable& t, std::size_t k,
                             std::size_t rounds, double tau, double eps,
                             PrivacyBudget& budget, Rng& rng);

struct SelectionQuality {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Precision/recall/F1 of `got` against `truth`.
SelectionQuality selection_metrics(const SelectionMask& truth,
                                   const SelectionMask& got);

}  // namespace privml

#endif  // PRIVML_SELECTION_HPP
