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

#include "privml/classifier.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace privml {

std::size_t PredictionSet::count_label(int label) const {
  std::size_t n = 0;
  for (const Item& it : items) n += it.label == label ? 1 : 0;
  return n;
}

NaiveBayesModel nb_train(const SparseDataset& d, double eps,
                         PrivacyBudget& budget, Rng& rng, double smoothing) {
  if (!(smoothing > 0.0)) {
    throw std::invalid_argument("nb_train: smoothing must be positive");
  }
  NaiveBayesModel m;
  m.smoothing = smoothing;
  m.joint_counts.assign(d.num_features, {0.0, 0.0});

  std::array<double, 2> label_counts{0.0, 0.0};
  for (const Tuple& t : d.tuples) {
    label_counts[t.label] += 1.0;
    for (std::uint32_t f : t.active_features) m.joint_counts[f][t.label] += 1.0;
  }

  const bool exact = eps == 0.0 || std::isinf(eps);
  if (exact) {
    m.label_counts = label_counts;
  } else {
    const double s = static_cast<double>(d.max_ones_per_tuple);
    // Budget split proportional to the component sensitivities 1 : s, which
    // lands every released count at scale (1+s)/eps.
    const double eps_labels = eps / (1.0 + s);
    const double eps_joint = eps - eps_labels;
    NoiseStream label_noise(budget.spend("nb.label_counts", eps_labels), rng);
    for (double& c : m.label_counts) c = 0.0;
    for (int l = 0; l < 2; ++l) {
      m.label_counts[l] = std::max(0.0, label_counts[l] + label_noise.laplace(1.0));
    }
    if (s > 0.0) {
      NoiseStream joint_noise(budget.spend("nb.joint_counts", eps_joint), rng);
      for (auto& fc : m.joint_counts) {
        for (int l = 0; l < 2; ++l) {
          fc[l] = std::max(0.0, fc[l] + joint_noise.laplace(s));
        }
      }
    }
  }
  m.n_total = m.label_counts[0] + m.label_counts[1];
  return m;
}

namespace {
// log P(F = value | L = l) with add-smoothing; the F=0 count is derived from
// the label total, clamped at zero so noisy joints cannot push it negative.
double log_conditional(const NaiveBayesModel& m, std::size_t f, int value, int l) {
  const double alpha = m.smoothing;
  const double ones = m.joint_counts[f][l];
  const double count =
      value == 1 ? ones : std::max(0.0, m.label_counts[l] - ones);
  return std::log(count + alpha) - std::log(m.label_counts[l] + 2.0 * alpha);
}

// Precomputed per-feature terms: the all-zeros baseline plus the step to add
// when a masked feature is active. Makes prediction O(active) per tuple.
struct NbEvaluator {
  double log_prior[2];
  double base[2];
  std::vector<std::array<double, 2>> step;  // log P(1|l) - log P(0|l), masked
  std::vector<bool> in_mask;

  NbEvaluator(const NaiveBayesModel& m, const SelectionMask* mask) {
    if (mask && mask->selected.size() != m.num_features()) {
      throw std::invalid_argument("nb_predict: mask does not match the model");
    }
    const double alpha = m.smoothing;
    const double total = m.label_counts[0] + m.label_counts[1];
    for (int l = 0; l < 2; ++l) {
      log_prior[l] =
          std::log(m.label_counts[l] + alpha) - std::log(total + 2.0 * alpha);
      base[l] = 0.0;
    }
    in_mask.assign(m.num_features(), true);
    step.assign(m.num_features(), {0.0, 0.0});
    for (std::size_t f = 0; f < m.num_features(); ++f) {
      if (mask && !mask->selected[f]) {
        in_mask[f] = false;
        continue;
      }
      for (int l = 0; l < 2; ++l) {
        const double zero = log_conditional(m, f, 0, l);
        base[l] += zero;
        step[f][l] = log_conditional(m, f, 1, l) - zero;
      }
    }
  }

  double posterior(const Tuple& t) const {
    double log_u[2] = {log_prior[0] + base[0], log_prior[1] + base[1]};
    for (std::uint32_t f : t.active_features) {
      if (f < in_mask.size() && in_mask[f]) {
        log_u[0] += step[f][0];
        log_u[1] += step[f][1];
      }
    }
    // p = u1/(u0+u1), evaluated stably via the log-odds.
    return 1.0 / (1.0 + std::exp(log_u[0] - log_u[1]));
  }
};
}  // namespace

double nb_predict(const NaiveBayesModel& m, const Tuple& t,
                  const SelectionMask* mask) {
  return NbEvaluator(m, mask).posterior(t);
}

double evaluate_accuracy(const NaiveBayesModel& m, const SparseDataset& test,
                         const SelectionMask* mask) {
  if (test.tuples.empty()) {
    throw std::invalid_argument("evaluate_accuracy: empty test set");
  }
  const NbEvaluator eval(m, mask);
  std::size_t correct = 0;
  for (const Tuple& t : test.tuples) {
    const double p = eval.posterior(t);
    const int predicted = p > 0.5 ? 1 : 0;
    correct += predicted == t.label ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

PredictionSet nb_predictions(const NaiveBayesModel& m, const SparseDataset& test,
                             const SelectionMask* mask) {
  const NbEvaluator eval(m, mask);
  PredictionSet ps;
  ps.items.reserve(test.size());
  for (const Tuple& t : test.tuples) {
    ps.items.push_back({t.label, eval.posterior(t)});
  }
  return ps;
}

std::string nb_to_json(const NaiveBayesModel& m) {
  nlohmann::ordered_json j;
  j["format"] = "privml.nb";
  j["version"] = 1;
  j["num_features"] = m.num_features();
  j["smoothing"] = m.smoothing;
  j["n_total"] = m.n_total;
  j["label_counts"] = {m.label_counts[0], m.label_counts[1]};
  nlohmann::ordered_json joints = nlohmann::ordered_json::array();
  for (const auto& fc : m.joint_counts) {
    joints.push_back({fc[0], fc[1]});
  }
  j["joint_counts"] = std::move(joints);
  return j.dump(2);
}

NaiveBayesModel nb_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("model JSON parse failure: ") + e.what());
  }
  if (j.value("format", "") != "privml.nb" || j.value("version", 0) != 1) {
    throw std::runtime_error("unrecognized model format/version");
  }
  NaiveBayesModel m;
  m.smoothing = j.at("smoothing").get<double>();
  m.n_total = j.at("n_total").get<double>();
  m.label_counts[0] = j.at("label_counts").at(0).get<double>();
  m.label_counts[1] = j.at("label_counts").at(1).get<double>();
  const auto& joints = j.at("joint_counts");
  m.joint_counts.reserve(joints.size());
  for (const auto& fc : joints) {
    m.joint_counts.push_back({fc.at(0).get<double>(), fc.at(1).get<double>()});
  }
  if (m.joint_counts.size() != j.at("num_features").get<std::size_t>()) {
    throw std::runtime_error("model JSON: feature count mismatch");
  }
  return m;
}

void nb_save(const NaiveBayesModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << nb_to_json(m) << "\n";
}

NaiveBayesModel nb_load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return nb_from_json(ss.str());
}

}  // namespace privml
