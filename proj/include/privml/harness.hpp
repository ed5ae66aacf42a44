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

#ifndef PRIVML_HARNESS_HPP
#define PRIVML_HARNESS_HPP

#include <map>
#include <string>
#include <vector>

#include "privml/classifier.hpp"
#include "privml/dp.hpp"
#include "privml/roc.hpp"

namespace privml {

// Anything wrong with an experiment configuration (unknown key, bad value,
// missing file). The CLI maps this to its config-error exit code.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key/value configuration with dotted section keys, parsed from a
// "key = value" text file. One CLI --set flag overrides one key.
class ExperimentConfig {
 public:
  ExperimentConfig() = default;

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_string(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;
  std::vector<std::string> get_string_list(
      const std::string& key, const std::vector<std::string>& fallback) const;

  // Validates keys and value ranges for the given experiment kind
  // ("selection", "roc" or "sweep"); throws ConfigError.
  void validate(const std::string& kind) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

struct MetricAggregate {
  double median = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
};

// One (run, fold) measurement: named metric values.
struct ReportRow {
  std::size_t run = 0;
  std::size_t fold = 0;
  std::map<std::string, double> metrics;
};

// One sweep grid point: the overridden parameters plus the aggregates of the
// experiment run at that point.
struct SweepPoint {
  std::map<std::string, std::string> params;
  std::map<std::string, MetricAggregate> aggregates;
};

struct RunReport {
  std::string kind;                                // selection | roc | sweep
  std::map<std::string, std::string> config;       // echo of the inputs
  std::vector<ReportRow> rows;
  std::map<std::string, MetricAggregate> aggregates;
  std::vector<LedgerEntry> ledger;                 // first run's spend trail
  std::vector<SweepPoint> sweep;
  // Named CSV blobs emitted next to the report (ROC curves and the like).
  std::map<std::string, std::string> attachments;

  bool operator==(const RunReport& other) const;
};

MetricAggregate aggregate_values(std::vector<double> values);

std::string report_to_json(const RunReport& r);
RunReport report_from_json(const std::string& text);

// Selection pipeline: per run and fold, optionally sample features, select,
// train Naive Bayes on the remaining budget, and measure accuracy plus the
// selection quality against the noiseless tau-set.
RunReport run_selection_experiment(const ExperimentConfig& cfg);

// Private-evaluation pipeline: build predictions (trained classifier or the
// synthetic well-separated generator), then compare the exact curve against
// priroc under both choosers and the Laplace baseline, with the tail-bound
// band reported alongside.
RunReport run_roc_experiment(const ExperimentConfig& cfg);

// Grid sweeps over epsilon / tau / budget split / sampling rate / threshold
// counts, aggregating the per-point medians into plot-ready series.
RunReport run_sweep(const ExperimentConfig& cfg);

// Writes report.json, metrics.csv, summary.csv, any attachments, and one
// x/y .dat series per sweep metric into dir (created if missing).
void emit_outputs(const RunReport& r, const std::string& dir);

// Uniform-window prediction generator used by the ROC experiments when no
// dataset is configured: positives on (pos_lo, pos_hi), negatives on
// (neg_lo, neg_hi).
PredictionSet synthetic_predictions(std::size_t num_items,
                                    std::size_t num_positive, double pos_lo,
                                    double pos_hi, double neg_lo, double neg_hi,
                                    std::uint64_t seed);

// Tuples listed by index, keeping the feature space and sparsity bound.
SparseDataset dataset_subset(const SparseDataset& d,
                             const std::vector<std::size_t>& indices);

}  // namespace privml

#endif  // PRIVML_HARNESS_HPP
