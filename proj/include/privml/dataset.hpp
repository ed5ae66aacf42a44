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

#ifndef PRIVML_DATASET_HPP
#define PRIVML_DATASET_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace privml {

// Malformed input line; carries the (1-based) line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// One record: a binary label plus the strictly increasing indices of the
// features whose value is 1.
struct Tuple {
  int label = 0;
  std::vector<std::uint32_t> active_features;

  bool has_feature(std::uint32_t f) const;
};

// Binary-feature, binary-label tuples in sparse form. Immutable by
// convention after construction: build, then share read-only.
struct SparseDataset {
  std::vector<Tuple> tuples;
  std::size_t num_features = 0;
  // Public bound on the number of 1s per tuple (the sparsity cap that
  // drives sensitivity accounting). load_* sets it to the max seen;
  // sampling lowers it to the sampling rate.
  std::size_t max_ones_per_tuple = 0;

  std::size_t size() const { return tuples.size(); }

  // Checks the structural invariants; throws std::invalid_argument.
  void validate() const;
};

struct FoldSplit {
  std::vector<std::vector<std::size_t>> train_indices;
  std::vector<std::vector<std::size_t>> test_indices;
  std::size_t num_folds = 0;
};

// Reads the sparse text format: one tuple per line, "<label> <idx>:1 ...",
// label in {0,1}, with an optional "#features N" header pinning the feature
// space. Without a header, num_features = 1 + max index seen.
SparseDataset load_sparse(const std::string& path);
SparseDataset load_sparse_stream(std::istream& in);

// Writes the same format, always with the "#features N" header so train and
// test files agree on dimensionality.
void save_sparse(const SparseDataset& d, const std::string& path);
void save_sparse_stream(const SparseDataset& d, std::ostream& out);

// Keeps at most r active features per tuple, chosen uniformly without
// replacement. Bounds sensitivity at the cost of thrown-away data.
SparseDataset sample_features(const SparseDataset& d, std::size_t r,
                              std::uint64_t seed);

// Restricts every tuple to the features present in the mask (a helper for
// training on a selected feature subset). The sparsity bound is kept: a
// restriction can only lower the true per-tuple count, and recomputing the
// bound from data would leak.
SparseDataset restrict_to_features(const SparseDataset& d,
                                   const std::vector<bool>& mask);

// Partitions [0,n) into k test sets with sizes differing by at most one.
FoldSplit split_folds(std::size_t n, std::size_t k, std::uint64_t seed);

// Label-XOR-noise generator: labels Bernoulli(1/2); each of the first
// num_predictive features equals the label flipped with probability
// flip_prob; the rest are Bernoulli noise tuned so the expected active count
// stays at most s, then each tuple is truncated to s active features.
SparseDataset generate_synthetic(std::size_t num_tuples,
                                 std::size_t num_features,
                                 std::size_t num_predictive, double flip_prob,
                                 std::size_t s, std::uint64_t seed);

}  // namespace privml

#endif  // PRIVML_DATASET_HPP
