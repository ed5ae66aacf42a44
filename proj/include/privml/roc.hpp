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

#ifndef PRIVML_ROC_HPP
#define PRIVML_ROC_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "privml/classifier.hpp"
#include "privml/dp.hpp"

namespace privml {

enum class ThresholdMethod { kFixedSpace, kRecursiveMedians, kAllPredictions };

std::string to_string(ThresholdMethod m);
ThresholdMethod threshold_method_from_string(const std::string& name);

// Strictly decreasing thresholds with the sentinels theta_0 = 1 and
// theta_last = 0 always present.
struct ThresholdSet {
  std::vector<double> thetas;
  ThresholdMethod method = ThresholdMethod::kAllPredictions;

  std::size_t size() const { return thetas.size(); }
  // Builds the canonical set from arbitrary values: sentinels attached,
  // sorted descending, duplicates coalesced.
  static ThresholdSet canonical(std::vector<double> values, ThresholdMethod m);
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // one per threshold, descending thetas
  double auc = 0.0;
  ThresholdSet thresholds;

  // True when the monotonicity/endpoint invariants hold (they always do
  // after the consistency step; the analysis-only raw variant may not).
  bool is_consistent() const;
};

struct BoundReport {
  double x = 0.0;
  double y = 0.0;
  double delta = 0.0;
  double upper_area = 1.0;
  double lower_area = 0.0;
  double bias = 0.0;
};

// Signed trapezoid area of a point sequence (the usual AUC when the points
// are monotone).
double trapezoid_area(const std::vector<RocPoint>& points);

// Exact ROC over all distinct prediction values; prediction at threshold
// theta is positive when p > theta.
RocCurve exact_roc(const PredictionSet& p);

// Exact ROC restricted to a given threshold set (no privacy involved; the
// discretization-bias oracle in the harness uses it).
RocCurve exact_roc_at(const PredictionSet& p, const ThresholdSet& thetas);

// Data-independent uniform grid {0, 1/g, ..., (g-1)/g, 1}, g = floor(alpha*n).
// Costs no budget.
ThresholdSet choose_fixed_space(std::size_t n, double alpha);

// Smooth sensitivity of the (lower) median over sorted points inside
// (lo, hi): max over k of e^{-k*beta} * max_t (x[m+t] - x[m+t-k-1]), indices
// clamped to lo below and hi above. Empty input returns hi - lo.
double smooth_sensitivity_median(const std::vector<double>& sorted_points,
                                 double beta, double lo, double hi);

// Recursive private medians: k levels, eps1/k per level, Cauchy-tailed noise
// at scale 8*S*/eps' per median, midpoint fallback when the noisy median
// leaves its range. Yields 2^k - 1 internal thresholds plus sentinels.
ThresholdSet choose_recursive_medians(const PredictionSet& p, double eps1,
                                      std::size_t k, PrivacyBudget& budget,
                                      Rng& rng);

struct PrirocOptions {
  double eps = 1.0;
  double eps1_fraction = 0.2;          // threshold-choice share (RecursiveMedians)
  ThresholdMethod chooser = ThresholdMethod::kRecursiveMedians;
  std::size_t k = 10;                  // RecursiveMedians levels
  double alpha = 1.0;                  // FixedSpace fraction
  bool consistency = true;             // isotonic post-processing on rates
};

// The private ROC pipeline: choose thresholds with eps1, release both bucket
// histograms through the wavelet mechanism at (eps - eps1)/2 each, form
// rates, and post-process for monotonicity. With consistency off the raw
// rates are returned (analysis mode; the curve may violate its invariants).
RocCurve priroc(const PredictionSet& p, const PrirocOptions& opts,
                PrivacyBudget& budget, Rng& rng);

// Laplace-mechanism baseline on a fixed threshold set: every TP/FP count and
// the label totals released at sensitivity 2*|thetas|+1, then the same
// consistency step. The threshold set itself is not charged.
RocCurve laplace_roc_baseline(const PredictionSet& p, const ThresholdSet& thetas,
                              double eps, PrivacyBudget& budget, Rng& rng);

// Tail-bound band around a curve: X = 2*Lap((1+log2(num_thetas))/eps, delta)
// / n_pos (Y with n_neg), per-point envelopes clipped to [0,1] with pinned
// endpoints, areas by trapezoid. X or Y at 1 or beyond degenerates the band
// to [0, 1].
BoundReport theorem5_bounds(const RocCurve& curve, std::size_t n_pos,
                            std::size_t n_neg, std::size_t num_thetas,
                            double eps, double delta, double bias);

// CSV with columns threshold,fpr,tpr.
std::string curve_to_csv(const RocCurve& curve);

}  // namespace privml

#endif  // PRIVML_ROC_HPP
