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

#ifndef PRIVML_CLASSIFIER_HPP
#define PRIVML_CLASSIFIER_HPP

#include <array>
#include <string>
#include <vector>

#include "privml/dataset.hpp"
#include "privml/dp.hpp"
#include "privml/selection.hpp"

namespace privml {

// Sufficient statistics of a binary Naive Bayes classifier. Counts are reals
// because private training releases them with noise.
struct NaiveBayesModel {
  std::array<double, 2> label_counts{0.0, 0.0};
  // joint_counts[f][l] approximates the number of tuples with F_f=1, L=l.
  std::vector<std::array<double, 2>> joint_counts;
  double n_total = 0.0;
  double smoothing = 1.0;

  std::size_t num_features() const { return joint_counts.size(); }
};

// (true label, predicted probability of label 1) pairs; the input to every
// ROC computation.
struct PredictionSet {
  struct Item {
    int label = 0;
    double p = 0.0;
  };
  std::vector<Item> items;

  std::size_t count_label(int label) const;
};

// Releases the label counts (sensitivity 1) and the per-feature joint counts
// (sensitivity s, the sparsity cap) under Laplace noise, splitting eps
// proportionally to the sensitivities so every count carries scale
// (1+s)/eps. Negative noisy counts clamp to zero. eps of 0 (or infinity)
// trains on exact counts.
NaiveBayesModel nb_train(const SparseDataset& d, double eps,
                         PrivacyBudget& budget, Rng& rng,
                         double smoothing = 1.0);

// Posterior probability of label 1 for the tuple, computed in log space over
// the masked features only (null mask = all features). Add-smoothing puts
// `smoothing` on every (feature, label) cell and twice that on each label
// total.
double nb_predict(const NaiveBayesModel& m, const Tuple& t,
                  const SelectionMask* mask = nullptr);

// Fraction of test tuples whose thresholded prediction (p > 1/2) matches the
// true label.
double evaluate_accuracy(const NaiveBayesModel& m, const SparseDataset& test,
                         const SelectionMask* mask = nullptr);

// Predictions for every tuple in the set, paired with the true labels.
PredictionSet nb_predictions(const NaiveBayesModel& m, const SparseDataset& test,
                             const SelectionMask* mask = nullptr);

// Versioned JSON round trip for the train/evaluate CLI split.
std::string nb_to_json(const NaiveBayesModel& m);
NaiveBayesModel nb_from_json(const std::string& text);
void nb_save(const NaiveBayesModel& m, const std::string& path);
NaiveBayesModel nb_load(const std::string& path);

}  // namespace privml

#endif  // PRIVML_CLASSIFIER_HPP
