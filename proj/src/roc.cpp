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

#include "privml/roc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "privml/rangequery.hpp"

namespace privml {

std::string to_string(ThresholdMethod m) {
  switch (m) {
    case ThresholdMethod::kFixedSpace: return "fixed_space";
    case ThresholdMethod::kRecursiveMedians: return "recursive_medians";
    case ThresholdMethod::kAllPredictions: return "all_predictions";
  }
  return "all_predictions";
}

ThresholdMethod threshold_method_from_string(const std::string& name) {
  if (name == "fixed_space") return ThresholdMethod::kFixedSpace;
  if (name == "recursive_medians") return ThresholdMethod::kRecursiveMedians;
  if (name == "all_predictions") return ThresholdMethod::kAllPredictions;
  throw std::invalid_argument("unknown threshold method: " + name);
}

ThresholdSet ThresholdSet::canonical(std::vector<double> values,
                                     ThresholdMethod m) {
  values.push_back(0.0);
  values.push_back(1.0);
  std::sort(values.begin(), values.end(), std::greater<double>());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  ThresholdSet ts;
  ts.method = m;
  ts.thetas = std::move(values);
  return ts;
}

bool RocCurve::is_consistent() const {
  if (points.empty()) return false;
  if (points.front().fpr != 0.0 || points.front().tpr != 0.0) return false;
  if (points.back().fpr != 1.0 || points.back().tpr != 1.0) return false;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].fpr < points[i - 1].fpr) return false;
    if (points[i].tpr < points[i - 1].tpr) return false;
  }
  for (const RocPoint& pt : points) {
    if (pt.fpr < 0.0 || pt.fpr > 1.0 || pt.tpr < 0.0 || pt.tpr > 1.0) {
      return false;
    }
  }
  return true;
}

double trapezoid_area(const std::vector<RocPoint>& points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) *
            (points[i].tpr + points[i - 1].tpr) / 2.0;
  }
  return area;
}

namespace {
void require_both_classes(const PredictionSet& p) {
  if (p.count_label(1) == 0 || p.count_label(0) == 0) {
    throw std::invalid_argument("ROC needs at least one item of each class");
  }
}

// Curve on the given thresholds from exact counts: positive when p > theta,
// final point pinned at (1,1).
RocCurve exact_curve_on(const PredictionSet& p, const ThresholdSet& ts) {
  const double n1 = static_cast<double>(p.count_label(1));
  const double n0 = static_cast<double>(p.count_label(0));
  RocCurve curve;
  curve.thresholds = ts;
  curve.points.resize(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double theta = ts.thetas[i];
    double tp = 0.0, fp = 0.0;
    for (const auto& item : p.items) {
      if (item.p > theta) (item.label == 1 ? tp : fp) += 1.0;
    }
    curve.points[i] = {fp / n0, tp / n1};
  }
  curve.points.front() = {0.0, 0.0};
  curve.points.back() = {1.0, 1.0};
  curve.auc = trapezoid_area(curve.points);
  return curve;
}
}  // namespace

RocCurve exact_roc(const PredictionSet& p) {
  require_both_classes(p);
  std::vector<double> values;
  values.reserve(p.items.size());
  for (const auto& item : p.items) values.push_back(item.p);
  return exact_curve_on(
      p, ThresholdSet::canonical(std::move(values), ThresholdMethod::kAllPredictions));
}

RocCurve exact_roc_at(const PredictionSet& p, const ThresholdSet& thetas) {
  require_both_classes(p);
  return exact_curve_on(p, thetas);
}

ThresholdSet choose_fixed_space(std::size_t n, double alpha) {
  const double g = std::floor(alpha * static_cast<double>(n));
  if (!(g >= 1.0)) {
    throw std::invalid_argument("choose_fixed_space: alpha*n below 1");
  }
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(g));
  for (double i = 1.0; i < g; i += 1.0) values.push_back(i / g);
  return ThresholdSet::canonical(std::move(values), ThresholdMethod::kFixedSpace);
}

double smooth_sensitivity_median(const std::vector<double>& sorted_points,
                                 double beta, double lo, double hi) {
  if (!(lo < hi)) {
    throw std::invalid_argument("smooth_sensitivity_median: lo must be < hi");
  }
  if (!(beta > 0.0)) {
    throw std::invalid_argument("smooth_sensitivity_median: beta must be positive");
  }
  const std::int64_t n = static_cast<std::int64_t>(sorted_points.size());
  if (n == 0) return hi - lo;
  const auto at = [&](std::int64_t i) {
    if (i < 0) return lo;
    if (i >= n) return hi;
    return sorted_points[static_cast<std::size_t>(i)];
  };
  const std::int64_t m = (n - 1) / 2;  // lower median
  double best = 0.0;
  for (std::int64_t k = 0; k <= n; ++k) {
    double width = 0.0;
    for (std::int64_t t = 0; t <= k + 1; ++t) {
      width = std::max(width, at(m + t) - at(m + t - k - 1));
    }
    best = std::max(best, std::exp(-beta * static_cast<double>(k)) * width);
  }
  return best;
}

namespace {
struct MedianTreeWalker {
  const std::vector<double>& sorted;          // all predictions, ascending
  std::vector<NoiseStream>& level_noise;      // one stream per recursion level
  double eps_prime;
  std::vector<double> out;

  // Emits the node's noisy median and recurses; [begin, end) indexes sorted,
  // (left, right) is the node's value range. Pre-order, so the noise stream
  // usage is a fixed function of the tree shape.
  void walk(std::size_t begin, std::size_t end, double left, double right,
            std::size_t level) {
    if (level == 0) return;
    NoiseStream& noise = level_noise[level_noise.size() - level];
    double m_noisy;
    if (begin == end) {
      // Median of nothing is out of range by convention.
      m_noisy = (left + right) / 2.0;
    } else {
      const std::size_t count = end - begin;
      const std::vector<double> node(sorted.begin() + begin, sorted.begin() + end);
      const double star =
          smooth_sensitivity_median(node, eps_prime / 2.0, left, right);
      const double median = node[(count - 1) / 2];
      m_noisy = median + noise.cauchy(8.0 * star);
      if (m_noisy <= left || m_noisy >= right) m_noisy = (left + right) / 2.0;
    }
    out.push_back(m_noisy);
    // Values strictly below / strictly above the released median.
    const auto lo_it = std::lower_bound(sorted.begin() + begin,
                                        sorted.begin() + end, m_noisy);
    const auto hi_it = std::upper_bound(sorted.begin() + begin,
                                        sorted.begin() + end, m_noisy);
    walk(begin, static_cast<std::size_t>(lo_it - sorted.begin()), left, m_noisy,
         level - 1);
    walk(static_cast<std::size_t>(hi_it - sorted.begin()), end, m_noisy, right,
         level - 1);
  }
};
}  // namespace

ThresholdSet choose_recursive_medians(const PredictionSet& p, double eps1,
                                      std::size_t k, PrivacyBudget& budget,
                                      Rng& rng) {
  if (!(eps1 > 0.0)) {
    throw std::invalid_argument("choose_recursive_medians: eps1 must be positive");
  }
  if (k < 1) {
    throw std::invalid_argument("choose_recursive_medians: k must be at least 1");
  }
  const double eps_prime = eps1 / static_cast<double>(k);
  std::vector<NoiseStream> level_noise;
  level_noise.reserve(k);
  for (std::size_t level = 0; level < k; ++level) {
    // Disjoint partitions within a level compose in parallel; levels stack
    // sequentially.
    level_noise.emplace_back(
        budget.spend("roc.thresholds.level" + std::to_string(level), eps_prime),
        rng);
  }
  std::vector<double> sorted;
  sorted.reserve(p.items.size());
  for (const auto& item : p.items) sorted.push_back(item.p);
  std::sort(sorted.begin(), sorted.end());

  MedianTreeWalker walker{sorted, level_noise, eps_prime, {}};
  walker.walk(0, sorted.size(), 0.0, 1.0, k);
  return ThresholdSet::canonical(std::move(walker.out),
                                 ThresholdMethod::kRecursiveMedians);
}

namespace {
// Bucket index in [1, l]: the i with theta_{i-1} >= p > theta_i; items at the
// extremes land in the first/last bucket.
std::size_t bucket_of(const std::vector<double>& thetas, double p) {
  const std::size_t l = thetas.size() - 1;
  // thetas is strictly decreasing; find the first theta strictly below p.
  const auto it = std::upper_bound(thetas.begin(), thetas.end(), p,
                                   [](double value, double theta) { return theta < value; });
  if (it == thetas.begin()) return 1;            // p >= theta_0 = 1
  if (it == thetas.end()) return l;              // p <= theta_l = 0
  const std::size_t i = static_cast<std::size_t>(it - thetas.begin());
  return std::min(std::max<std::size_t>(i, 1), l);
}

std::vector<double> noisy_prefix_rates(const std::vector<double>& buckets,
                                       const SpendReceipt& receipt, Rng& rng) {
  const HaarCoefficients noisy = privelet_perturb(haar_forward(buckets), receipt, rng);
  const std::vector<double> recon = haar_inverse(noisy);
  std::vector<double> prefix(buckets.size() + 1, 0.0);
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    prefix[i + 1] = prefix[i] + recon[i];
  }
  const double denom = std::max(prefix.back(), 1.0);
  std::vector<double> rates(prefix.size());
  for (std::size_t i = 0; i < prefix.size(); ++i) rates[i] = prefix[i] / denom;
  return rates;
}
}  // namespace

RocCurve priroc(const PredictionSet& p, const PrirocOptions& opts,
                PrivacyBudget& budget, Rng& rng) {
  require_both_classes(p);
  if (!(opts.eps > 0.0)) {
    throw std::invalid_argument("priroc: eps must be positive");
  }
  if (!(opts.eps1_fraction >= 0.0 && opts.eps1_fraction < 1.0)) {
    throw std::invalid_argument("priroc: eps1_fraction must be in [0,1)");
  }

  ThresholdSet thetas;
  double eps1 = 0.0;
  switch (opts.chooser) {
    case ThresholdMethod::kFixedSpace:
      thetas = choose_fixed_space(p.items.size(), opts.alpha);
      break;
    case ThresholdMethod::kRecursiveMedians: {
      eps1 = opts.eps1_fraction * opts.eps;
      thetas = choose_recursive_medians(p, eps1, opts.k, budget, rng);
      break;
    }
    case ThresholdMethod::kAllPredictions: {
      // Free because the thresholds are not released separately; this mode
      // exists for calibration against the exact curve.
      std::vector<double> values;
      for (const auto& item : p.items) values.push_back(item.p);
      thetas = ThresholdSet::canonical(std::move(values),
                                       ThresholdMethod::kAllPredictions);
      break;
    }
  }

  const double eps2 =
      std::isinf(opts.eps) ? opts.eps : opts.eps - eps1;
  const std::size_t l = thetas.size() - 1;
  std::vector<double> xtp(l, 0.0), xfp(l, 0.0);
  for (const auto& item : p.items) {
    const std::size_t b = bucket_of(thetas.thetas, item.p) - 1;
    (item.label == 1 ? xtp : xfp)[b] += 1.0;
  }

  const SpendReceipt tp_receipt = budget.spend("roc.tp_counts", eps2 / 2.0);
  std::vector<double> tpr = noisy_prefix_rates(xtp, tp_receipt, rng);
  const SpendReceipt fp_receipt = budget.spend("roc.fp_counts", eps2 / 2.0);
  std::vector<double> fpr = noisy_prefix_rates(xfp, fp_receipt, rng);

  if (opts.consistency) {
    tpr = isotonic_project(tpr);
    fpr = isotonic_project(fpr);
  }
  // Endpoint values are definitional: nothing exceeds theta_0 = 1 and
  // everything exceeds theta_l = 0.
  tpr.front() = fpr.front() = 0.0;
  tpr.back() = fpr.back() = 1.0;

  RocCurve curve;
  curve.thresholds = std::move(thetas);
  curve.points.resize(l + 1);
  for (std::size_t i = 0; i <= l; ++i) curve.points[i] = {fpr[i], tpr[i]};
  curve.auc = trapezoid_area(curve.points);
  return curve;
}

RocCurve laplace_roc_baseline(const PredictionSet& p, const ThresholdSet& thetas,
                              double eps, PrivacyBudget& budget, Rng& rng) {
  require_both_classes(p);
  if (!(eps > 0.0)) {
    throw std::invalid_argument("laplace_roc_baseline: eps must be positive");
  }
  const std::size_t l = thetas.size() - 1;
  const double sensitivity = 2.0 * static_cast<double>(thetas.size()) + 1.0;
  NoiseStream noise(budget.spend("roc.laplace_baseline", eps), rng);

  double n1 = 0.0, n0 = 0.0;
  for (const auto& item : p.items) (item.label == 1 ? n1 : n0) += 1.0;
  const double noisy_n1 = std::max(n1 + noise.laplace(sensitivity), 1.0);
  const double noisy_n0 = std::max(n0 + noise.laplace(sensitivity), 1.0);

  std::vector<double> tpr(l + 1, 0.0), fpr(l + 1, 0.0);
  for (std::size_t i = 1; i < l; ++i) {
    const double theta = thetas.thetas[i];
    double tp = 0.0, fp = 0.0;
    for (const auto& item : p.items) {
      if (item.p > theta) (item.label == 1 ? tp : fp) += 1.0;
    }
    tpr[i] = (tp + noise.laplace(sensitivity)) / noisy_n1;
    fpr[i] = (fp + noise.laplace(sensitivity)) / noisy_n0;
  }
  tpr = isotonic_project(tpr);
  fpr = isotonic_project(fpr);
  tpr.front() = fpr.front() = 0.0;
  tpr.back() = fpr.back() = 1.0;

  RocCurve curve;
  curve.thresholds = thetas;
  curve.points.resize(l + 1);
  for (std::size_t i = 0; i <= l; ++i) curve.points[i] = {fpr[i], tpr[i]};
  curve.auc = trapezoid_area(curve.points);
  return curve;
}

BoundReport theorem5_bounds(const RocCurve& curve, std::size_t n_pos,
                            std::size_t n_neg, std::size_t num_thetas,
                            double eps, double delta, double bias) {
  if (n_pos < 1 || n_neg < 1 || num_thetas < 1) {
    throw std::invalid_argument("theorem5_bounds: counts must be positive");
  }
  if (!(eps > 0.0)) {
    throw std::invalid_argument("theorem5_bounds: eps must be positive");
  }
  BoundReport report;
  report.delta = delta;
  report.bias = bias;
  if (std::isinf(eps)) {
    report.x = 0.0;
    report.y = 0.0;
  } else {
    const double scale =
        (1.0 + std::log2(static_cast<double>(num_thetas))) / eps;
    const double tail = laplace_tail_quantile(scale, delta);
    report.x = 2.0 * tail / static_cast<double>(n_pos);
    report.y = 2.0 * tail / static_cast<double>(n_neg);
  }
  if (report.x >= 1.0 || report.y >= 1.0) {
    report.upper_area = 1.0;
    report.lower_area = 0.0;
    return report;
  }

  std::vector<RocPoint> upper(curve.points.size());
  std::vector<RocPoint> lower(curve.points.size());
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const RocPoint& pt = curve.points[i];
    upper[i] = {std::max(0.0, pt.fpr - report.y), std::min(1.0, pt.tpr + report.x)};
    lower[i] = {std::min(1.0, pt.fpr + report.y), std::max(0.0, pt.tpr - report.x)};
  }
  // Endpoints are exact by definition.
  upper.front() = lower.front() = {0.0, 0.0};
  upper.back() = lower.back() = {1.0, 1.0};
  report.upper_area = trapezoid_area(upper);
  report.lower_area = trapezoid_area(lower);
  return report;
}

std::string curve_to_csv(const RocCurve& curve) {
  std::ostringstream os;
  os << "threshold,fpr,tpr\n";
  os.precision(17);
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    os << curve.thresholds.thetas[i] << ',' << curve.points[i].fpr << ','
       << curve.points[i].tpr << "\n";
  }
  return os.str();
}

}  // namespace privml
