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

#include "privml/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "privml/dp.hpp"

namespace privml {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

bool Tuple::has_feature(std::uint32_t f) const {
  return std::binary_search(active_features.begin(), active_features.end(), f);
}

void SparseDataset::validate() const {
  for (const Tuple& t : tuples) {
    if (t.label != 0 && t.label != 1) {
      throw std::invalid_argument("dataset: label outside {0,1}");
    }
    if (t.active_features.size() > max_ones_per_tuple) {
      throw std::invalid_argument("dataset: tuple exceeds sparsity bound");
    }
    for (std::size_t i = 0; i < t.active_features.size(); ++i) {
      if (t.active_features[i] >= num_features) {
        throw std::invalid_argument("dataset: feature index out of range");
      }
      if (i > 0 && t.active_features[i] <= t.active_features[i - 1]) {
        throw std::invalid_argument("dataset: indices not strictly increasing");
      }
    }
  }
}

SparseDataset load_sparse(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open dataset file: " + path);
  }
  return load_sparse_stream(in);
}

SparseDataset load_sparse_stream(std::istream& in) {
  SparseDataset d;
  bool have_header = false;
  std::size_t declared_features = 0;
  std::uint32_t max_index_seen = 0;
  bool any_index = false;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string word;
      hs >> word;
      if (word == "features") {
        if (!(hs >> declared_features)) {
          throw ParseError(lineno, "malformed #features header");
        }
        have_header = true;
      }
      continue;  // other comment lines are ignored
    }

    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    Tuple t;
    if (tok == "0") {
      t.label = 0;
    } else if (tok == "1") {
      t.label = 1;
    } else {
      throw ParseError(lineno, "label must be 0 or 1, got \"" + tok + "\"");
    }
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) {
        throw ParseError(lineno, "expected <index>:1, got \"" + tok + "\"");
      }
      const std::string idx_str = tok.substr(0, colon);
      const std::string val_str = tok.substr(colon + 1);
      if (val_str != "1") {
        throw ParseError(lineno, "feature value must be 1 (binary features), got \"" +
                                     val_str + "\"");
      }
      std::uint64_t idx = 0;
      try {
        std::size_t pos = 0;
        idx = std::stoull(idx_str, &pos);
        if (pos != idx_str.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ParseError(lineno, "bad feature index \"" + idx_str + "\"");
      }
      if (idx > std::numeric_limits<std::uint32_t>::max()) {
        throw ParseError(lineno, "feature index too large");
      }
      t.active_features.push_back(static_cast<std::uint32_t>(idx));
      max_index_seen = std::max(max_index_seen, static_cast<std::uint32_t>(idx));
      any_index = true;
    }
    // Canonical form: sorted, duplicates collapse (a feature listed twice is
    // still just "value 1").
    std::sort(t.active_features.begin(), t.active_features.end());
    t.active_features.erase(
        std::unique(t.active_features.begin(), t.active_features.end()),
        t.active_features.end());
    d.max_ones_per_tuple = std::max(d.max_ones_per_tuple, t.active_features.size());
    d.tuples.push_back(std::move(t));
  }

  d.num_features = have_header ? declared_features
                               : (any_index ? static_cast<std::size_t>(max_index_seen) + 1
                                            : 0);
  if (have_header && any_index && max_index_seen >= declared_features) {
    throw std::invalid_argument(
        "dataset: feature index " + std::to_string(max_index_seen) +
        " exceeds declared feature count " + std::to_string(declared_features));
  }
  return d;
}

void save_sparse(const SparseDataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write dataset file: " + path);
  }
  save_sparse_stream(d, out);
}

void save_sparse_stream(const SparseDataset& d, std::ostream& out) {
  out << "#features " << d.num_features << "\n";
  for (const Tuple& t : d.tuples) {
    out << t.label;
    for (std::uint32_t f : t.active_features) out << ' ' << f << ":1";
    out << "\n";
  }
}

namespace {
// Uniform choice of keep elements, preserving sorted order in the output.
std::vector<std::uint32_t> sample_without_replacement(
    const std::vector<std::uint32_t>& items, std::size_t keep, Rng& rng) {
  std::vector<std::uint32_t> pool = items;
  // Partial Fisher-Yates: the first `keep` slots end up a uniform subset.
  for (std::size_t i = 0; i < keep; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(keep);
  std::sort(pool.begin(), pool.end());
  return pool;
}
}  // namespace

SparseDataset sample_features(const SparseDataset& d, std::size_t r,
                              std::uint64_t seed) {
  if (r < 1) {
    throw std::invalid_argument("sample_features: r must be at least 1");
  }
  Rng rng(derive_seed(seed, 0x5a3d));
  SparseDataset out;
  out.num_features = d.num_features;
  out.max_ones_per_tuple = std::min(d.max_ones_per_tuple, r);
  out.tuples.reserve(d.tuples.size());
  for (const Tuple& t : d.tuples) {
    Tuple s;
    s.label = t.label;
    if (t.active_features.size() <= r) {
      s.active_features = t.active_features;
    } else {
      s.active_features = sample_without_replacement(t.active_features, r, rng);
    }
    out.tuples.push_back(std::move(s));
  }
  return out;
}

SparseDataset restrict_to_features(const SparseDataset& d,
                                   const std::vector<bool>& mask) {
  if (mask.size() != d.num_features) {
    throw std::invalid_argument("restrict_to_features: mask length mismatch");
  }
  SparseDataset out;
  out.num_features = d.num_features;
  out.max_ones_per_tuple = d.max_ones_per_tuple;
  out.tuples.reserve(d.tuples.size());
  for (const Tuple& t : d.tuples) {
    Tuple s;
    s.label = t.label;
    for (std::uint32_t f : t.active_features) {
      if (mask[f]) s.active_features.push_back(f);
    }
    out.tuples.push_back(std::move(s));
  }
  return out;
}

FoldSplit split_folds(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) {
    throw std::invalid_argument("split_folds: need at least 2 folds");
  }
  if (k > n) {
    throw std::invalid_argument("split_folds: more folds than tuples");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(derive_seed(seed, 0xf01d));
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(order[i - 1], order[j]);
  }

  FoldSplit fs;
  fs.num_folds = k;
  fs.test_indices.assign(k, {});
  fs.train_indices.assign(k, {});
  for (std::size_t i = 0; i < n; ++i) {
    fs.test_indices[i % k].push_back(order[i]);
  }
  for (std::size_t f = 0; f < k; ++f) {
    std::sort(fs.test_indices[f].begin(), fs.test_indices[f].end());
    std::vector<bool> in_test(n, false);
    for (std::size_t i : fs.test_indices[f]) in_test[i] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_test[i]) fs.train_indices[f].push_back(i);
    }
  }
  return fs;
}

SparseDataset generate_synthetic(std::size_t num_tuples,
                                 std::size_t num_features,
                                 std::size_t num_predictive, double flip_prob,
                                 std::size_t s, std::uint64_t seed) {
  if (num_predictive > num_features) {
    throw std::invalid_argument("generate_synthetic: num_predictive > num_features");
  }
  if (s > num_features) {
    throw std::invalid_argument("generate_synthetic: s > num_features");
  }
  if (!(flip_prob >= 0.0 && flip_prob <= 1.0)) {
    throw std::invalid_argument("generate_synthetic: flip_prob outside [0,1]");
  }

  // Predictive features are active about half the time, so they eat
  // num_predictive/2 of the sparsity allowance in expectation.
  double noise_q = 0.0;
  if (num_features > num_predictive) {
    const double slack =
        static_cast<double>(s) - 0.5 * static_cast<double>(num_predictive);
    noise_q = std::max(0.0, slack) /
              static_cast<double>(num_features - num_predictive);
    noise_q = std::min(noise_q, 1.0);
  }

  Rng rng(derive_seed(seed, 0x5e17));
  SparseDataset d;
  d.num_features = num_features;
  d.max_ones_per_tuple = s;
  d.tuples.reserve(num_tuples);
  for (std::size_t i = 0; i < num_tuples; ++i) {
    Tuple t;
    t.label = rng.uniform01() < 0.5 ? 0 : 1;
    for (std::size_t f = 0; f < num_predictive; ++f) {
      const bool flip = rng.uniform01() < flip_prob;
      const int value = t.label ^ (flip ? 1 : 0);
      if (value == 1) t.active_features.push_back(static_cast<std::uint32_t>(f));
    }
    if (noise_q > 0.0) {
      for (std::size_t f = num_predictive; f < num_features; ++f) {
        if (rng.uniform01() < noise_q) {
          t.active_features.push_back(static_cast<std::uint32_t>(f));
        }
      }
    }
    if (t.active_features.size() > s) {
      t.active_features = sample_without_replacement(t.active_features, s, rng);
    }
    d.tuples.push_back(std::move(t));
  }
  return d;
}

}  // namespace privml
