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

#include "privml/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace privml {

std::size_t SelectionMask::count() const {
  std::size_t c = 0;
  for (bool b : selected) c += b ? 1 : 0;
  return c;
}

SelectionMask SelectionMask::all(std::size_t num_features) {
  SelectionMask m;
  m.selected.assign(num_features, true);
  m.method = "all";
  return m;
}

SelectionMask select_score_perturbation(const ScoreTable& t, double tau,
                                        double eps, PrivacyBudget& budget,
                                        Rng& rng) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("select_score_perturbation: eps must be positive");
  }
  NoiseStream noise(budget.spend("select.score_perturbation", eps), rng);
  const double sensitivity =
      t.per_query_sensitivity * static_cast<double>(t.affected_queries);
  SelectionMask m;
  m.method = "score_perturbation";
  m.epsilon_used = eps;
  m.selected.resize(t.num_features());
  for (std::size_t i = 0; i < t.num_features(); ++i) {
    m.selected[i] = t.scores[i] + noise.laplace(sensitivity) >= tau;
  }
  return m;
}

SelectionMask select_topk_perturbation(const ScoreTable& t, std::size_t k,
                                       double eps, PrivacyBudget& budget,
                                       Rng& rng) {
  if (k > t.num_features()) {
    throw std::invalid_argument("select_topk_perturbation: k exceeds feature count");
  }
  if (!(eps > 0.0)) {
    throw std::invalid_argument("select_topk_perturbation: eps must be positive");
  }
  NoiseStream noise(budget.spend("select.topk_perturbation", eps), rng);
  const double sensitivity =
      t.per_query_sensitivity * static_cast<double>(t.affected_queries);
  std::vector<double> noisy(t.num_features());
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    noisy[i] = t.scores[i] + noise.laplace(sensitivity);
  }
  std::vector<std::size_t> order(noisy.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return noisy[a] > noisy[b];  // stable keeps ties at the lower index
  });
  SelectionMask m;
  m.method = "topk_perturbation";
  m.epsilon_used = eps;
  m.selected.assign(t.num_features(), false);
  for (std::size_t i = 0; i < k; ++i) m.selected[order[i]] = true;
  return m;
}

SelectionMask select_ptt(const ScoreTable& t, double tau, double eps,
                         bool monotone_hint, PrivacyBudget& budget, Rng& rng) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("select_ptt: eps must be positive");
  }
  if (monotone_hint && t.kind != ScoreKind::kTotalCount) {
    throw std::invalid_argument(
        "select_ptt: monotone_hint applies to total-count scores only");
  }
  NoiseStream noise(budget.spend("select.ptt", eps), rng);
  // General guarantee is 2*sigma*(1/scale); the monotone case halves it.
  const double sensitivity = monotone_hint ? t.per_query_sensitivity
                                           : 2.0 * t.per_query_sensitivity;
  const double noisy_tau = tau + noise.laplace(sensitivity);
  SelectionMask m;
  m.method = "ptt";
  m.epsilon_used = eps;
  m.selected.resize(t.num_features());
  for (std::size_t i = 0; i < t.num_features(); ++i) {
    m.selected[i] = t.scores[i] >= noisy_tau;
  }
  return m;
}

SelectionMask select_noisycut(const ScoreTable& t, double tau, double eps,
                              PrivacyBudget& budget, Rng& rng) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("select_noisycut: eps must be positive");
  }
  const double half = eps / 2.0;
  NoiseStream tau_noise(budget.spend("select.noisycut.threshold", half), rng);
  NoiseStream score_noise(budget.spend("select.noisycut.scores", half), rng);
  const double sigma = t.per_query_sensitivity;
  const double noisy_tau = tau + tau_noise.laplace(sigma);
  SelectionMask m;
  m.method = "noisycut";
  m.epsilon_used = eps;
  m.selected.resize(t.num_features());
  for (std::size_t i = 0; i < t.num_features(); ++i) {
    m.selected[i] = t.scores[i] + score_noise.laplace(sigma) >= noisy_tau;
  }
  return m;
}

namespace {
double sq_dist(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

std::size_t nearest_center(const Point2& p, const std::vector<Point2>& centers) {
  std::size_t best = 0;
  double best_d = sq_dist(p, centers[0]);
  for (std::size_t c = 1; c < centers.size(); ++c) {
    const double d = sq_dist(p, centers[c]);
    if (d < best_d) {  // strict: ties stay at the lowest id
      best_d = d;
      best = c;
    }
  }
  return best;
}
}  // namespace

ClusterState private_kmeans(const std::vector<Point2>& points, std::size_t k,
                            std::size_t rounds, double eps,
                            double point_l1_bound, PrivacyBudget& budget,
                            Rng& rng, double init_bound) {
  if (k == 0) throw std::invalid_argument("private_kmeans: k must be positive");
  if (rounds == 0) {
    throw std::invalid_argument("private_kmeans: rounds must be positive");
  }
  if (!(eps > 0.0)) {
    throw std::invalid_argument("private_kmeans: eps must be positive");
  }
  if (!(point_l1_bound > 0.0)) {
    throw std::invalid_argument("private_kmeans: point bound must be positive");
  }
  if (init_bound <= 0.0) init_bound = point_l1_bound;

  ClusterState st;
  st.rounds = rounds;
  // Data-independent start: quantile spread along the diagonal of the public
  // L1 ball, i.e. from the origin toward (B/2, B/2).
  st.centers.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    const double frac = (static_cast<double>(c) + 0.5) / static_cast<double>(k);
    st.centers[c] = {frac * init_bound / 2.0, frac * init_bound / 2.0};
  }
  st.assignments.assign(points.size(), 0);

  const double eps_round = eps / static_cast<double>(rounds);
  for (std::size_t round = 0; round < rounds; ++round) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      st.assignments[i] = nearest_center(points[i], st.centers);
    }
    std::vector<double> size(k, 0.0);
    std::vector<Point2> sum(k);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::size_t c = st.assignments[i];
      size[c] += 1.0;
      sum[c].x += points[i].x;
      sum[c].y += points[i].y;
    }
    const std::string tag = "select.kmeans.round" + std::to_string(round);
    NoiseStream count_noise(budget.spend(tag + ".sizes", eps_round / 2.0), rng);
    NoiseStream sum_noise(budget.spend(tag + ".sums", eps_round / 2.0), rng);
    std::vector<double> noisy_size(k);
    for (std::size_t c = 0; c < k; ++c) {
      noisy_size[c] = size[c] + count_noise.laplace(1.0);
    }
    for (std::size_t c = 0; c < k; ++c) {
      const double nx = sum[c].x + sum_noise.laplace(point_l1_bound);
      const double ny = sum[c].y + sum_noise.laplace(point_l1_bound);
      if (size[c] == 0.0) continue;  // empty cluster keeps its center
      const double denom = std::max(noisy_size[c], 1.0);
      st.centers[c] = {nx / denom, ny / denom};
    }
  }
  return st;
}

SelectionMask select_cluster(const ScoreTable& t, std::size_t k,
                             std::size_t rounds, double tau, double eps,
                             PrivacyBudget& budget, Rng& rng) {
  if (t.kind != ScoreKind::kTotalCount && t.kind != ScoreKind::kDifferenceCount) {
    throw std::invalid_argument(
        "select_cluster: only total-count and difference-count scores have a "
        "2-D count embedding");
  }
  std::vector<Point2> points(t.num_features());
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i] = {static_cast<double>(t.counts[i].n10),
                 static_cast<double>(t.counts[i].n11)};
  }
  // One added/removed tuple moves at most Delta(Q) of these count points by
  // one, so the release of cluster sums changes by at most Delta(Q) in L1.
  // The count points themselves live in the [0, n] box; n is treated as
  // public and only seeds the data-independent initialization.
  const double sum_sensitivity = static_cast<double>(t.affected_queries);
  const double data_box =
      t.counts.empty() ? sum_sensitivity
                       : std::max<double>(1.0, static_cast<double>(t.counts[0].total()));
  const ClusterState st = private_kmeans(points, k, rounds, eps,
                                         sum_sensitivity, budget, rng, data_box);

  SelectionMask m;
  m.method = "cluster";
  m.epsilon_used = eps;
  m.selected.assign(t.num_features(), false);
  std::vector<bool> accepted(st.centers.size(), false);
  for (std::size_t c = 0; c < st.centers.size(); ++c) {
    const double center_score = t.kind == ScoreKind::kTotalCount
                                    ? st.centers[c].x + st.centers[c].y
                                    : std::abs(st.centers[c].y - st.centers[c].x);
    accepted[c] = center_score >= tau;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    m.selected[i] = accepted[st.assignments[i]];
  }
  return m;
}

SelectionQuality selection_metrics(const SelectionMask& truth,
                                   const SelectionMask& got) {
  if (truth.selected.size() != got.selected.size()) {
    throw std::invalid_argument("selection_metrics: mask length mismatch");
  }
  std::size_t both = 0, n_truth = 0, n_got = 0;
  for (std::size_t i = 0; i < truth.selected.size(); ++i) {
    const bool a = truth.selected[i];
    const bool b = got.selected[i];
    n_truth += a ? 1 : 0;
    n_got += b ? 1 : 0;
    both += (a && b) ? 1 : 0;
  }
  SelectionQuality q;
  q.precision = n_got == 0 ? (n_truth == 0 ? 1.0 : 0.0)
                           : static_cast<double>(both) / static_cast<double>(n_got);
  q.recall = n_truth == 0 ? 1.0
                          : static_cast<double>(both) / static_cast<double>(n_truth);
  q.f1 = (q.precision + q.recall) == 0.0
             ? 0.0
             : 2.0 * q.precision * q.recall / (q.precision + q.recall);
  return q;
}

}  // namespace privml
