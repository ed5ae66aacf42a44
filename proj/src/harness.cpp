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

#include "privml/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "privml/dataset.hpp"
#include "privml/rangequery.hpp"
#include "privml/scoring.hpp"
#include "privml/selection.hpp"

namespace privml {

namespace {

constexpr std::uint64_t kSeedData = 0xda7a;
constexpr std::uint64_t kSeedFolds = 0xf01d;
constexpr std::uint64_t kSeedSample = 0x5a3d;
constexpr std::uint64_t kSeedPipeline = 0x919e;
constexpr std::uint64_t kSeedPredictions = 0x9ed5;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "dataset.path",
      "dataset.synthetic.num_tuples",
      "dataset.synthetic.num_features",
      "dataset.synthetic.num_predictive",
      "dataset.synthetic.flip_prob",
      "dataset.synthetic.s",
      "predictions.synthetic.num_items",
      "predictions.synthetic.num_positive",
      "predictions.synthetic.pos_lo",
      "predictions.synthetic.pos_hi",
      "predictions.synthetic.neg_lo",
      "predictions.synthetic.neg_hi",
      "scoring.kind",
      "scoring.neighbor_model",
      "scoring.n_bound",
      "selection.method",
      "selection.tau",
      "selection.top_k",
      "selection.sample_rate",
      "selection.budget_fraction",
      "selection.cluster_k",
      "selection.cluster_rounds",
      "selection.monotone_hint",
      "classifier.epsilon",
      "classifier.smoothing",
      "roc.k",
      "roc.alpha",
      "roc.eps1_fraction",
      "roc.delta",
      "roc.laplace_t",
      "roc.consistency",
      "budget.total_epsilon",
      "run.runs",
      "run.folds",
      "run.master_seed",
      "sweep.kind",
      "sweep.methods",
      "sweep.taus",
      "sweep.epsilons",
      "sweep.fractions",
      "sweep.rates",
      "sweep.ks",
      "sweep.alphas",
      "sweep.ts",
      "sweep.x",
      "sweep.group",
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    }
    cfg.set(key, value);
  }
  return cfg;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

bool ExperimentConfig::has(const std::string& key) const {
  return entries_.count(key) > 0;
}

std::string ExperimentConfig::get_string(const std::string& key,
                                         const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

std::string ExperimentConfig::require_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": not a number: " + it->second);
  }
}

std::size_t ExperimentConfig::get_size(const std::string& key,
                                       std::size_t fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(it->second, &pos);
    if (pos != it->second.size() || v < 0) throw std::invalid_argument("");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": not a count: " + it->second);
  }
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key " + key + ": not a boolean: " + v);
}

namespace {
std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}
}  // namespace

std::vector<double> ExperimentConfig::get_double_list(
    const std::string& key, const std::vector<double>& fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::vector<double> out;
  for (const std::string& item : split_list(it->second)) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("config key " + key + ": not a number list");
    }
  }
  if (out.empty()) throw ConfigError("config key " + key + ": empty list");
  return out;
}

std::vector<std::string> ExperimentConfig::get_string_list(
    const std::string& key, const std::vector<std::string>& fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const auto out = split_list(it->second);
  if (out.empty()) throw ConfigError("config key " + key + ": empty list");
  return out;
}

void ExperimentConfig::validate(const std::string& kind) const {
  for (const auto& [key, value] : entries_) {
    if (!known_keys().count(key)) {
      throw ConfigError("unknown config key: " + key);
    }
  }
  // Parse every present numeric key so typos surface here, not mid-run.
  get_double("dataset.synthetic.flip_prob", 0.0);
  get_size("dataset.synthetic.num_tuples", 0);
  get_size("dataset.synthetic.num_features", 0);
  get_size("dataset.synthetic.num_predictive", 0);
  get_size("dataset.synthetic.s", 0);
  get_size("predictions.synthetic.num_items", 0);
  get_size("predictions.synthetic.num_positive", 0);
  get_double("selection.tau", 0.0);
  get_size("selection.top_k", 0);
  get_size("selection.sample_rate", 0);
  get_size("selection.cluster_k", 0);
  get_size("selection.cluster_rounds", 0);
  get_bool("selection.monotone_hint", false);
  get_double("classifier.epsilon", 0.0);
  get_double("classifier.smoothing", 1.0);
  get_size("roc.k", 0);
  get_double("roc.alpha", 1.0);
  get_double("roc.eps1_fraction", 0.2);
  get_double("roc.delta", 0.95);
  get_size("roc.laplace_t", 10);
  get_bool("roc.consistency", true);
  get_double("budget.total_epsilon", 1.0);
  get_size("run.runs", 1);
  get_size("run.folds", 2);
  get_size("run.master_seed", 0);

  const double flip = get_double("dataset.synthetic.flip_prob", 0.0);
  if (flip < 0.0 || flip > 1.0) {
    throw ConfigError("dataset.synthetic.flip_prob must be within [0,1]");
  }
  const double frac = get_double("selection.budget_fraction", 0.5);
  if (frac < 0.0 || frac > 1.0) {
    throw ConfigError("selection.budget_fraction must be within [0,1]");
  }
  const double eps1_frac = get_double("roc.eps1_fraction", 0.2);
  if (eps1_frac < 0.0 || eps1_frac >= 1.0) {
    throw ConfigError("roc.eps1_fraction must be within [0,1)");
  }
  const double delta = get_double("roc.delta", 0.95);
  if (delta <= 0.0 || delta >= 1.0) {
    throw ConfigError("roc.delta must be within (0,1)");
  }
  if (!(get_double("budget.total_epsilon", 1.0) > 0.0)) {
    throw ConfigError("budget.total_epsilon must be positive");
  }
  if (has("scoring.kind")) score_kind_from_string(require_string("scoring.kind"));
  if (has("scoring.neighbor_model")) {
    const std::string m = require_string("scoring.neighbor_model");
    if (m != "unbounded" && m != "bounded") {
      throw ConfigError("scoring.neighbor_model must be unbounded or bounded");
    }
  }
  if (has("selection.method")) {
    const std::string m = require_string("selection.method");
    static const std::set<std::string> methods = {
        "none", "score_perturbation", "topk", "ptt", "noisycut", "cluster"};
    if (!methods.count(m)) throw ConfigError("unknown selection.method: " + m);
  }
  if (has("dataset.path") && !std::filesystem::exists(require_string("dataset.path"))) {
    throw ConfigError("dataset.path does not exist: " + require_string("dataset.path"));
  }

  const bool have_dataset = has("dataset.path") || has("dataset.synthetic.num_tuples");
  const bool have_predictions = has("predictions.synthetic.num_items");
  if (kind == "selection" && !have_dataset) {
    throw ConfigError("selection experiment needs dataset.path or dataset.synthetic.*");
  }
  if (kind == "roc" && !have_dataset && !have_predictions) {
    throw ConfigError(
        "roc experiment needs a dataset or predictions.synthetic.num_items");
  }
  if (kind == "sweep") {
    const std::string sk = get_string("sweep.kind", "");
    static const std::set<std::string> kinds = {
        "selection_tau", "selection_eps", "selection_split",
        "selection_rate", "roc_eps", "roc_thresholds"};
    if (!kinds.count(sk)) throw ConfigError("unknown sweep.kind: " + sk);
    if (sk.rfind("selection", 0) == 0 && !have_dataset) {
      throw ConfigError("selection sweep needs a dataset");
    }
    if (sk.rfind("roc", 0) == 0 && !have_dataset && !have_predictions) {
      throw ConfigError("roc sweep needs a dataset or synthetic predictions");
    }
  }
}

MetricAggregate aggregate_values(std::vector<double> values) {
  MetricAggregate a;
  if (values.empty()) return a;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  a.median = n % 2 == 1 ? values[n / 2]
                        : (values[n / 2 - 1] + values[n / 2]) / 2.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - a.mean) * (v - a.mean);
  a.stddev = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  return a;
}

bool RunReport::operator==(const RunReport& other) const {
  if (kind != other.kind || config != other.config) return false;
  if (rows.size() != other.rows.size()) return false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].run != other.rows[i].run || rows[i].fold != other.rows[i].fold ||
        rows[i].metrics != other.rows[i].metrics) {
      return false;
    }
  }
  const auto agg_eq = [](const std::map<std::string, MetricAggregate>& a,
                         const std::map<std::string, MetricAggregate>& b) {
    if (a.size() != b.size()) return false;
    auto it = b.begin();
    for (const auto& [k, v] : a) {
      if (it->first != k || it->second.median != v.median ||
          it->second.mean != v.mean || it->second.stddev != v.stddev) {
        return false;
      }
      ++it;
    }
    return true;
  };
  if (!agg_eq(aggregates, other.aggregates)) return false;
  if (ledger.size() != other.ledger.size()) return false;
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    if (ledger[i].label != other.ledger[i].label ||
        ledger[i].epsilon != other.ledger[i].epsilon) {
      return false;
    }
  }
  if (sweep.size() != other.sweep.size()) return false;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (sweep[i].params != other.sweep[i].params) return false;
    if (!agg_eq(sweep[i].aggregates, other.sweep[i].aggregates)) return false;
  }
  return attachments == other.attachments;
}

namespace {
nlohmann::ordered_json aggregates_to_json(
    const std::map<std::string, MetricAggregate>& aggs) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [name, a] : aggs) {
    j[name] = {{"median", a.median}, {"mean", a.mean}, {"stddev", a.stddev}};
  }
  return j;
}

std::map<std::string, MetricAggregate> aggregates_from_json(
    const nlohmann::json& j) {
  std::map<std::string, MetricAggregate> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    MetricAggregate a;
    a.median = it.value().at("median").get<double>();
    a.mean = it.value().at("mean").get<double>();
    a.stddev = it.value().at("stddev").get<double>();
    out[it.key()] = a;
  }
  return out;
}
}  // namespace

std::string report_to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["format"] = "privml.report";
  j["version"] = 1;
  j["kind"] = r.kind;
  j["config"] = r.config;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const ReportRow& row : r.rows) {
    nlohmann::ordered_json jr;
    jr["run"] = row.run;
    jr["fold"] = row.fold;
    jr["metrics"] = row.metrics;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  j["aggregates"] = aggregates_to_json(r.aggregates);
  nlohmann::ordered_json ledger = nlohmann::ordered_json::array();
  for (const LedgerEntry& e : r.ledger) {
    ledger.push_back({{"label", e.label}, {"epsilon", e.epsilon}});
  }
  j["ledger"] = std::move(ledger);
  nlohmann::ordered_json sweep = nlohmann::ordered_json::array();
  for (const SweepPoint& p : r.sweep) {
    nlohmann::ordered_json jp;
    jp["params"] = p.params;
    jp["aggregates"] = aggregates_to_json(p.aggregates);
    sweep.push_back(std::move(jp));
  }
  j["sweep"] = std::move(sweep);
  j["attachments"] = r.attachments;
  return j.dump(2);
}

RunReport report_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("report JSON parse failure: ") + e.what());
  }
  if (j.value("format", "") != "privml.report" || j.value("version", 0) != 1) {
    throw std::runtime_error("unrecognized report format/version");
  }
  RunReport r;
  r.kind = j.at("kind").get<std::string>();
  r.config = j.at("config").get<std::map<std::string, std::string>>();
  for (const auto& jr : j.at("rows")) {
    ReportRow row;
    row.run = jr.at("run").get<std::size_t>();
    row.fold = jr.at("fold").get<std::size_t>();
    row.metrics = jr.at("metrics").get<std::map<std::string, double>>();
    r.rows.push_back(std::move(row));
  }
  r.aggregates = aggregates_from_json(j.at("aggregates"));
  for (const auto& je : j.at("ledger")) {
    r.ledger.push_back({je.at("label").get<std::string>(),
                        je.at("epsilon").get<double>()});
  }
  for (const auto& jp : j.at("sweep")) {
    SweepPoint p;
    p.params = jp.at("params").get<std::map<std::string, std::string>>();
    p.aggregates = aggregates_from_json(jp.at("aggregates"));
    r.sweep.push_back(std::move(p));
  }
  r.attachments = j.at("attachments").get<std::map<std::string, std::string>>();
  return r;
}

SparseDataset dataset_subset(const SparseDataset& d,
                             const std::vector<std::size_t>& indices) {
  SparseDataset out;
  out.num_features = d.num_features;
  out.max_ones_per_tuple = d.max_ones_per_tuple;
  out.tuples.reserve(indices.size());
  for (std::size_t i : indices) out.tuples.push_back(d.tuples.at(i));
  return out;
}

PredictionSet synthetic_predictions(std::size_t num_items,
                                    std::size_t num_positive, double pos_lo,
                                    double pos_hi, double neg_lo, double neg_hi,
                                    std::uint64_t seed) {
  if (num_positive > num_items) {
    throw std::invalid_argument("synthetic_predictions: more positives than items");
  }
  Rng rng(derive_seed(seed, kSeedPredictions));
  PredictionSet ps;
  ps.items.reserve(num_items);
  for (std::size_t i = 0; i < num_items; ++i) {
    const bool positive = i < num_positive;
    const double lo = positive ? pos_lo : neg_lo;
    const double hi = positive ? pos_hi : neg_hi;
    ps.items.push_back({positive ? 1 : 0, lo + rng.uniform01() * (hi - lo)});
  }
  return ps;
}

namespace {

SparseDataset materialize_dataset(const ExperimentConfig& cfg,
                                  std::uint64_t master) {
  if (cfg.has("dataset.path")) {
    return load_sparse(cfg.require_string("dataset.path"));
  }
  return generate_synthetic(cfg.get_size("dataset.synthetic.num_tuples", 1000),
                            cfg.get_size("dataset.synthetic.num_features", 500),
                            cfg.get_size("dataset.synthetic.num_predictive", 20),
                            cfg.get_double("dataset.synthetic.flip_prob", 0.2),
                            cfg.get_size("dataset.synthetic.s", 20),
                            derive_seed(master, kSeedData));
}

NeighborModel neighbor_model_of(const ExperimentConfig& cfg) {
  return cfg.get_string("scoring.neighbor_model", "unbounded") == "bounded"
             ? NeighborModel::kBounded
             : NeighborModel::kUnbounded;
}

// The exact tau-set (or exact top-k) the private selector is judged against.
SelectionMask noiseless_selection(const ScoreTable& table,
                                  const std::string& method, double tau,
                                  std::size_t top_k) {
  SelectionMask truth;
  truth.method = "exact";
  truth.selected.assign(table.num_features(), false);
  if (method == "topk") {
    std::vector<std::size_t> order(table.num_features());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return table.scores[a] > table.scores[b];
    });
    for (std::size_t i = 0; i < std::min(top_k, order.size()); ++i) {
      truth.selected[order[i]] = true;
    }
  } else {
    for (std::size_t i = 0; i < table.num_features(); ++i) {
      truth.selected[i] = table.scores[i] >= tau;
    }
  }
  return truth;
}

SelectionMask dispatch_selection(const std::string& method,
                                 const ScoreTable& table, double tau,
                                 std::size_t top_k, std::size_t cluster_k,
                                 std::size_t cluster_rounds, bool monotone_hint,
                                 double eps, PrivacyBudget& budget, Rng& rng) {
  if (method == "score_perturbation") {
    return select_score_perturbation(table, tau, eps, budget, rng);
  }
  if (method == "topk") {
    return select_topk_perturbation(table, top_k, eps, budget, rng);
  }
  if (method == "ptt") {
    return select_ptt(table, tau, eps, monotone_hint, budget, rng);
  }
  if (method == "noisycut") {
    return select_noisycut(table, tau, eps, budget, rng);
  }
  if (method == "cluster") {
    return select_cluster(table, cluster_k, cluster_rounds, tau, eps, budget, rng);
  }
  throw ConfigError("unknown selection.method: " + method);
}

double majority_accuracy(const SparseDataset& train, const SparseDataset& test) {
  std::size_t ones = 0;
  for (const Tuple& t : train.tuples) ones += t.label;
  const int majority = 2 * ones >= train.size() ? 1 : 0;
  std::size_t hit = 0;
  for (const Tuple& t : test.tuples) hit += t.label == majority ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(test.size());
}

void finalize_aggregates(RunReport& report) {
  std::map<std::string, std::vector<double>> series;
  for (const ReportRow& row : report.rows) {
    for (const auto& [name, value] : row.metrics) series[name].push_back(value);
  }
  for (const auto& [name, values] : series) {
    report.aggregates[name] = aggregate_values(values);
  }
}

}  // namespace

RunReport run_selection_experiment(const ExperimentConfig& cfg) {
  cfg.validate("selection");
  const std::uint64_t master = cfg.get_size("run.master_seed", 42);
  const std::size_t runs = cfg.get_size("run.runs", 1);
  const std::size_t folds = cfg.get_size("run.folds", 10);
  const double total_eps = cfg.get_double("budget.total_epsilon", 1.0);
  const std::string method = cfg.get_string("selection.method", "ptt");
  const ScoreKind kind =
      score_kind_from_string(cfg.get_string("scoring.kind", "tc"));
  const NeighborModel model = neighbor_model_of(cfg);
  const std::int64_t n_bound =
      static_cast<std::int64_t>(cfg.get_size("scoring.n_bound", 0));
  const double tau = cfg.get_double("selection.tau", 0.0);
  const std::size_t top_k = cfg.get_size("selection.top_k", 10);
  const std::size_t rate = cfg.get_size("selection.sample_rate", 0);
  const double fraction = cfg.get_double("selection.budget_fraction",
                                         method == "score_perturbation" ? 0.5 : 0.2);
  const std::size_t cluster_k = cfg.get_size("selection.cluster_k", 4);
  const std::size_t cluster_rounds = cfg.get_size("selection.cluster_rounds", 5);
  const bool monotone_hint = cfg.get_bool("selection.monotone_hint", false);
  const double smoothing = cfg.get_double("classifier.smoothing", 1.0);

  const SparseDataset dataset = materialize_dataset(cfg, master);

  RunReport report;
  report.kind = "selection";
  report.config = cfg.entries();
  for (std::size_t run = 0; run < runs; ++run) {
    const FoldSplit fs =
        split_folds(dataset.size(), folds, derive_seed(master, kSeedFolds, run));
    for (std::size_t fold = 0; fold < folds; ++fold) {
      const SparseDataset train = dataset_subset(dataset, fs.train_indices[fold]);
      const SparseDataset test = dataset_subset(dataset, fs.test_indices[fold]);
      Rng rng(derive_seed(master, kSeedPipeline, run, fold));
      PrivacyBudget budget(total_eps);

      const SparseDataset train_used =
          rate > 0 ? sample_features(train, rate,
                                     derive_seed(master, kSeedSample, run, fold))
                   : train;

      ReportRow row;
      row.run = run;
      row.fold = fold;
      SelectionMask mask;
      double eps_nb = total_eps;
      if (method == "none") {
        mask = SelectionMask::all(dataset.num_features);
      } else {
        const ScoreTable table = make_score_table(train_used, kind, model, n_bound);
        const double eps_fs = fraction * total_eps;
        mask = dispatch_selection(method, table, tau, top_k, cluster_k,
                                  cluster_rounds, monotone_hint, eps_fs, budget,
                                  rng);
        const SelectionMask truth = noiseless_selection(table, method, tau, top_k);
        const SelectionQuality q = selection_metrics(truth, mask);
        row.metrics["precision"] = q.precision;
        row.metrics["recall"] = q.recall;
        row.metrics["f1"] = q.f1;
        eps_nb = std::isinf(total_eps) ? total_eps : total_eps - eps_fs;
      }
      row.metrics["selected_count"] = static_cast<double>(mask.count());

      const SparseDataset train_masked =
          mask.count() == mask.selected.size()
              ? train_used
              : restrict_to_features(train_used, mask.selected);
      const NaiveBayesModel nb =
          nb_train(train_masked, eps_nb, budget, rng, smoothing);
      row.metrics["accuracy"] = evaluate_accuracy(nb, test, &mask);
      row.metrics["majority_accuracy"] = majority_accuracy(train, test);
      row.metrics["epsilon_spent"] = budget.spent();
      if (report.ledger.empty()) report.ledger = budget.ledger();
      report.rows.push_back(std::move(row));
    }
  }
  finalize_aggregates(report);
  return report;
}

namespace {
std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Equi-depth prediction quantiles: t thresholds in total, the favorable
// data-dependent choice the Laplace baseline is allowed for free.
ThresholdSet equidepth_thresholds(const PredictionSet& p, std::size_t t) {
  if (t < 2) throw std::invalid_argument("laplace baseline needs >= 2 thresholds");
  std::vector<double> sorted;
  sorted.reserve(p.items.size());
  for (const auto& item : p.items) sorted.push_back(item.p);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> values;
  for (std::size_t j = 1; j + 1 < t; ++j) {
    const std::size_t idx = j * sorted.size() / (t - 1);
    values.push_back(sorted[std::min(idx, sorted.size() - 1)]);
  }
  return ThresholdSet::canonical(std::move(values), ThresholdMethod::kAllPredictions);
}

PredictionSet materialize_predictions(const ExperimentConfig& cfg,
                                      const SparseDataset* dataset,
                                      std::uint64_t master, std::size_t run,
                                      std::size_t fold, ReportRow* row) {
  if (dataset == nullptr) {
    return synthetic_predictions(
        cfg.get_size("predictions.synthetic.num_items", 558),
        cfg.get_size("predictions.synthetic.num_positive", 481),
        cfg.get_double("predictions.synthetic.pos_lo", 0.45),
        cfg.get_double("predictions.synthetic.pos_hi", 1.0),
        cfg.get_double("predictions.synthetic.neg_lo", 0.0),
        cfg.get_double("predictions.synthetic.neg_hi", 0.55),
        derive_seed(master, kSeedPredictions));
  }
  const std::size_t folds = cfg.get_size("run.folds", 10);
  const FoldSplit fs =
      split_folds(dataset->size(), folds, derive_seed(master, kSeedFolds, run));
  const SparseDataset train = dataset_subset(*dataset, fs.train_indices[fold]);
  const SparseDataset test = dataset_subset(*dataset, fs.test_indices[fold]);
  const double cls_eps = cfg.get_double("classifier.epsilon", 0.0);
  PrivacyBudget train_budget(cls_eps > 0.0 ? cls_eps
                                           : std::numeric_limits<double>::infinity());
  Rng train_rng(derive_seed(master, kSeedPipeline, run, fold));
  const NaiveBayesModel nb =
      nb_train(train, cls_eps, train_budget, train_rng,
               cfg.get_double("classifier.smoothing", 1.0));
  if (row) row->metrics["classifier_accuracy"] = evaluate_accuracy(nb, test);
  return nb_predictions(nb, test);
}
}  // namespace

RunReport run_roc_experiment(const ExperimentConfig& cfg) {
  cfg.validate("roc");
  const std::uint64_t master = cfg.get_size("run.master_seed", 42);
  const std::size_t runs = cfg.get_size("run.runs", 10);
  const double total_eps = cfg.get_double("budget.total_epsilon", 1.0);
  const double eps1_fraction = cfg.get_double("roc.eps1_fraction", 0.2);
  const std::size_t k = cfg.get_size("roc.k", 10);
  const double alpha = cfg.get_double("roc.alpha", 1.0);
  const double delta = cfg.get_double("roc.delta", 0.95);
  const std::size_t laplace_t = cfg.get_size("roc.laplace_t", 10);
  const bool consistency = cfg.get_bool("roc.consistency", true);
  const bool have_dataset =
      cfg.has("dataset.path") || cfg.has("dataset.synthetic.num_tuples");
  // One held-out evaluation per run; dataset mode redraws the split per run.
  const std::size_t folds_used = 1;

  SparseDataset dataset;
  if (have_dataset) dataset = materialize_dataset(cfg, master);

  RunReport report;
  report.kind = "roc";
  report.config = cfg.entries();
  for (std::size_t run = 0; run < runs; ++run) {
    for (std::size_t fold = 0; fold < folds_used; ++fold) {
      ReportRow row;
      row.run = run;
      row.fold = fold;
      const PredictionSet preds = materialize_predictions(
          cfg, have_dataset ? &dataset : nullptr, master, run, fold, &row);
      const std::size_t n1 = preds.count_label(1);
      const std::size_t n0 = preds.count_label(0);

      const RocCurve exact = exact_roc(preds);
      row.metrics["auc_exact"] = exact.auc;

      PrirocOptions rm;
      rm.eps = total_eps;
      rm.eps1_fraction = eps1_fraction;
      rm.chooser = ThresholdMethod::kRecursiveMedians;
      rm.k = k;
      rm.consistency = consistency;
      PrivacyBudget rm_budget(total_eps);
      Rng rm_rng(derive_seed(master, kSeedPipeline, run, 1));
      const RocCurve recmed = priroc(preds, rm, rm_budget, rm_rng);
      row.metrics["auc_recursive_medians"] = recmed.auc;
      row.metrics["err_recursive_medians"] = std::abs(recmed.auc - exact.auc);
      row.metrics["epsilon_spent"] = rm_budget.spent();

      PrirocOptions fx;
      fx.eps = total_eps;
      fx.eps1_fraction = 0.0;
      fx.chooser = ThresholdMethod::kFixedSpace;
      fx.alpha = alpha;
      fx.consistency = consistency;
      PrivacyBudget fx_budget(total_eps);
      Rng fx_rng(derive_seed(master, kSeedPipeline, run, 2));
      const RocCurve fixed = priroc(preds, fx, fx_budget, fx_rng);
      row.metrics["auc_fixed_space"] = fixed.auc;
      row.metrics["err_fixed_space"] = std::abs(fixed.auc - exact.auc);

      PrivacyBudget lp_budget(total_eps);
      Rng lp_rng(derive_seed(master, kSeedPipeline, run, 3));
      const ThresholdSet lp_thetas = equidepth_thresholds(preds, laplace_t);
      const RocCurve lap =
          laplace_roc_baseline(preds, lp_thetas, total_eps, lp_budget, lp_rng);
      row.metrics["auc_laplace"] = lap.auc;
      row.metrics["err_laplace"] = std::abs(lap.auc - exact.auc);

      // Tail-bound band around the released medians curve; the bias term is
      // the exact threshold-discretization gap (an analysis-only oracle).
      const double bias =
          std::abs(exact.auc - exact_roc_at(preds, recmed.thresholds).auc);
      const double eps2 = std::isinf(total_eps)
                              ? total_eps
                              : total_eps * (1.0 - eps1_fraction);
      const BoundReport bounds =
          theorem5_bounds(recmed, n1, n0,
                          next_pow2(recmed.thresholds.size() - 1), eps2 / 2.0,
                          delta, bias);
      row.metrics["bound_upper"] = bounds.upper_area;
      row.metrics["bound_lower"] = bounds.lower_area;
      row.metrics["bound_x"] = bounds.x;
      row.metrics["bound_y"] = bounds.y;
      row.metrics["bound_covers_exact"] =
          exact.auc >= bounds.lower_area && exact.auc <= bounds.upper_area ? 1.0
                                                                           : 0.0;

      if (report.ledger.empty()) report.ledger = rm_budget.ledger();
      if (run == 0 && fold == 0) {
        report.attachments["roc_exact.csv"] = curve_to_csv(exact);
        report.attachments["roc_recursive_medians.csv"] = curve_to_csv(recmed);
        report.attachments["roc_fixed_space.csv"] = curve_to_csv(fixed);
        report.attachments["roc_laplace.csv"] = curve_to_csv(lap);
      }
      report.rows.push_back(std::move(row));
    }
  }
  finalize_aggregates(report);
  return report;
}

namespace {
struct SweepAxis {
  std::string config_key;
  std::vector<std::string> values;
};

RunReport run_base_experiment(const std::string& sweep_kind,
                              const ExperimentConfig& cfg) {
  return sweep_kind.rfind("roc", 0) == 0 ? run_roc_experiment(cfg)
                                         : run_selection_experiment(cfg);
}
}  // namespace

RunReport run_sweep(const ExperimentConfig& cfg) {
  cfg.validate("sweep");
  const std::string kind = cfg.require_string("sweep.kind");

  RunReport report;
  report.kind = "sweep";
  report.config = cfg.entries();

  ExperimentConfig base;
  for (const auto& [key, value] : cfg.entries()) {
    if (key.rfind("sweep.", 0) != 0) base.set(key, value);
  }

  SweepAxis axis;
  std::vector<std::string> methods;
  if (kind == "selection_tau") {
    axis = {"selection.tau", cfg.get_string_list("sweep.taus", {})};
    methods = cfg.get_string_list("sweep.methods",
                                  {base.get_string("selection.method", "ptt")});
    report.config["sweep.x"] = "selection.tau";
    report.config["sweep.group"] = "selection.method";
  } else if (kind == "selection_eps") {
    axis = {"budget.total_epsilon", cfg.get_string_list("sweep.epsilons", {})};
    methods = cfg.get_string_list("sweep.methods",
                                  {base.get_string("selection.method", "ptt")});
    report.config["sweep.x"] = "budget.total_epsilon";
    report.config["sweep.group"] = "selection.method";
  } else if (kind == "selection_split") {
    axis = {"selection.budget_fraction", cfg.get_string_list("sweep.fractions", {})};
    methods = cfg.get_string_list("sweep.methods",
                                  {base.get_string("selection.method", "ptt")});
    report.config["sweep.x"] = "selection.budget_fraction";
    report.config["sweep.group"] = "selection.method";
  } else if (kind == "selection_rate") {
    axis = {"selection.sample_rate", cfg.get_string_list("sweep.rates", {})};
    methods = cfg.get_string_list("sweep.methods",
                                  {base.get_string("selection.method", "ptt")});
    report.config["sweep.x"] = "selection.sample_rate";
    report.config["sweep.group"] = "selection.method";
  } else if (kind == "roc_eps") {
    axis = {"budget.total_epsilon", cfg.get_string_list("sweep.epsilons", {})};
    report.config["sweep.x"] = "budget.total_epsilon";
  } else if (kind == "roc_thresholds") {
    // Parallel lists: one grid point per position.
    const auto ks = cfg.get_string_list("sweep.ks", {});
    const auto alphas = cfg.get_string_list("sweep.alphas", {});
    const auto ts = cfg.get_string_list("sweep.ts", {});
    if (ks.size() != alphas.size() || ks.size() != ts.size()) {
      throw ConfigError("sweep.ks, sweep.alphas and sweep.ts must align");
    }
    report.config["sweep.x"] = "roc.k";
    for (std::size_t i = 0; i < ks.size(); ++i) {
      ExperimentConfig child = base;
      child.set("roc.k", ks[i]);
      child.set("roc.alpha", alphas[i]);
      child.set("roc.laplace_t", ts[i]);
      const RunReport sub = run_roc_experiment(child);
      SweepPoint point;
      point.params = {{"roc.k", ks[i]}, {"roc.alpha", alphas[i]},
                      {"roc.laplace_t", ts[i]}};
      point.aggregates = sub.aggregates;
      report.sweep.push_back(std::move(point));
    }
    return report;
  }

  if (axis.values.empty()) {
    throw ConfigError("sweep over " + kind + " has no grid values");
  }
  if (methods.empty()) methods.push_back("");
  for (const std::string& method : methods) {
    for (const std::string& value : axis.values) {
      ExperimentConfig child = base;
      if (!method.empty()) child.set("selection.method", method);
      child.set(axis.config_key, value);
      const RunReport sub = run_base_experiment(kind, child);
      SweepPoint point;
      point.params[axis.config_key] = value;
      if (!method.empty()) point.params["selection.method"] = method;
      point.aggregates = sub.aggregates;
      report.sweep.push_back(std::move(point));
    }
  }
  return report;
}

namespace {
std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}
}  // namespace

void emit_outputs(const RunReport& r, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + dir);
  const auto write_file = [&](const std::string& name, const std::string& content) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + name);
    out << content;
  };

  write_file("report.json", report_to_json(r) + "\n");

  // metrics.csv: one row per (run, fold), the union of metric names.
  std::set<std::string> metric_names;
  for (const ReportRow& row : r.rows) {
    for (const auto& [name, value] : row.metrics) metric_names.insert(name);
  }
  std::ostringstream metrics;
  metrics << "run,fold";
  for (const auto& name : metric_names) metrics << ',' << csv_escape(name);
  metrics << "\n";
  for (const ReportRow& row : r.rows) {
    metrics << row.run << ',' << row.fold;
    for (const auto& name : metric_names) {
      metrics << ',';
      const auto it = row.metrics.find(name);
      if (it != row.metrics.end()) metrics << format_double(it->second);
    }
    metrics << "\n";
  }
  write_file("metrics.csv", metrics.str());

  std::ostringstream summary;
  summary << "metric,median,mean,stddev\n";
  for (const auto& [name, a] : r.aggregates) {
    summary << csv_escape(name) << ',' << format_double(a.median) << ','
            << format_double(a.mean) << ',' << format_double(a.stddev) << "\n";
  }
  write_file("summary.csv", summary.str());

  for (const auto& [name, content] : r.attachments) write_file(name, content);

  if (!r.sweep.empty()) {
    std::set<std::string> param_names;
    std::set<std::string> agg_names;
    for (const SweepPoint& p : r.sweep) {
      for (const auto& [k, v] : p.params) param_names.insert(k);
      for (const auto& [k, v] : p.aggregates) agg_names.insert(k);
    }
    std::ostringstream sweep_csv;
    bool first = true;
    for (const auto& name : param_names) {
      sweep_csv << (first ? "" : ",") << csv_escape(name);
      first = false;
    }
    for (const auto& name : agg_names) sweep_csv << ",median_" << csv_escape(name);
    sweep_csv << "\n";
    for (const SweepPoint& p : r.sweep) {
      first = true;
      for (const auto& name : param_names) {
        sweep_csv << (first ? "" : ",");
        first = false;
        const auto it = p.params.find(name);
        if (it != p.params.end()) sweep_csv << csv_escape(it->second);
      }
      for (const auto& name : agg_names) {
        sweep_csv << ',';
        const auto it = p.aggregates.find(name);
        if (it != p.aggregates.end()) sweep_csv << format_double(it->second.median);
      }
      sweep_csv << "\n";
    }
    write_file("sweep.csv", sweep_csv.str());

    // One x/y series per (group value, metric): plot-ready columns.
    const auto x_it = r.config.find("sweep.x");
    const std::string x_key = x_it == r.config.end() ? "" : x_it->second;
    const auto g_it = r.config.find("sweep.group");
    const std::string group_key = g_it == r.config.end() ? "" : g_it->second;
    std::map<std::string, std::ostringstream> series;
    for (const SweepPoint& p : r.sweep) {
      const auto xv = p.params.find(x_key);
      if (xv == p.params.end()) continue;
      std::string suffix;
      if (!group_key.empty()) {
        const auto gv = p.params.find(group_key);
        if (gv != p.params.end()) suffix = "_" + gv->second;
      }
      for (const auto& [metric, agg] : p.aggregates) {
        series[metric + suffix] << xv->second << ' ' << format_double(agg.median)
                                << "\n";
      }
    }
    for (auto& [name, stream] : series) {
      write_file(name + ".dat", stream.str());
    }
  }
}

}  // namespace privml
