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

#ifndef PRIVML_RANGEQUERY_HPP
#define PRIVML_RANGEQUERY_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "privml/dp.hpp"

namespace privml {

// Haar tree over the zero-padded counts. details is heap-ordered: node 0
// spans all padded leaves, node i has children 2i+1 and 2i+2; the value at a
// node is (mean of left half - mean of right half) / 2.
struct HaarCoefficients {
  double base = 0.0;             // mean of the padded vector
  std::vector<double> details;   // padded_len - 1 nodes
  std::size_t padded_len = 1;
};

HaarCoefficients haar_forward(std::span<const double> counts);

// Exact inverse; returns the padded vector (truncate to the original length
// as needed).
std::vector<double> haar_inverse(const HaarCoefficients& h);

// Wavelet-coefficient perturbation: with lambda = (1 + log2(m))/eps, the base
// gets Laplace(lambda/m) and a detail spanning `span` leaves gets
// Laplace(lambda/span). One added/removed tuple shifts the weighted
// coefficient vector by at most 1 + log2(m), so the release meets the
// receipt's epsilon.
HaarCoefficients privelet_perturb(const HaarCoefficients& h,
                                  const SpendReceipt& receipt, Rng& rng);

// One-sided range query: the sum of the first j elements (1-indexed).
double one_sided_query(std::span<const double> x, std::size_t j);

// L2-closest non-decreasing vector (pool adjacent violators), then clamped
// into [0,1]. The clamped result is the exact projection onto
// {non-decreasing} intersected with the unit box.
std::vector<double> isotonic_project(std::span<const double> y);

}  // namespace privml

#endif  // PRIVML_RANGEQUERY_HPP
