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

#ifndef PRIVML_DP_HPP
#define PRIVML_DP_HPP

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace privml {

// Raised when a spend would push the ledger past the total budget.
class BudgetExhaustedError : public std::runtime_error {
 public:
  BudgetExhaustedError(const std::string& label, double requested,
                       double remaining);
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

// Seedable 64-bit generator. Every randomized operation takes one of these
// explicitly; experiments derive independent streams from (master seed, run,
// fold, stage) so reruns are bit-reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0,1); never returns an endpoint, so
  // log/tan transforms below are always finite.
  double uniform01();

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Deterministic stream derivation: mixes the given words through splitmix64.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a = 0,
                          std::uint64_t b = 0, std::uint64_t c = 0);

// One draw with density proportional to exp(-|z|/scale), by inverse CDF.
// Consumes exactly one uniform, so draws at different scales under the same
// stream state differ only by the scale factor.
double sample_laplace(double scale, Rng& rng);

// One draw with density proportional to 1/(1+z^2): tan(pi*(U-1/2)) for U
// uniform on (0,1).
double sample_cauchy_like(Rng& rng);

// The two-sided tail bound t with P(|Z| <= t) = delta for Z ~ Laplace(scale):
// t = scale * ln(1/(1-delta)).
double laplace_tail_quantile(double scale, double delta);

struct LedgerEntry {
  std::string label;
  double epsilon;
};

// Proof that budget was debited. Noise helpers only operate through a
// receipt, so no mechanism can draw calibrated noise without an entry in the
// ledger. An infinite epsilon puts the receipt in noiseless mode.
class SpendReceipt {
 public:
  double epsilon() const { return epsilon_; }
  bool noiseless() const {
    return epsilon_ == std::numeric_limits<double>::infinity();
  }

 private:
  friend class PrivacyBudget;
  explicit SpendReceipt(double epsilon) : epsilon_(epsilon) {}
  double epsilon_;
};

// Epsilon ledger with sequential and parallel composition accounting.
// spent == sum of ledger entries and never exceeds the total.
class PrivacyBudget {
 public:
  explicit PrivacyBudget(double total_epsilon);

  // Sequential composition: the full epsilon is debited.
  SpendReceipt spend(const std::string& label, double epsilon);

  // Parallel composition over disjoint partitions: only max(epsilons) is
  // debited. The caller asserts disjointness.
  SpendReceipt spend_parallel(const std::string& label,
                              const std::vector<double>& epsilons);

  double total() const { return total_; }
  double spent() const { return spent_; }
  double remaining() const { return total_ - spent_; }
  const std::vector<LedgerEntry>& ledger() const { return ledger_; }

  // Recomputes spent from the ledger; used to audit the running total.
  double replay() const;

 private:
  double total_;
  double spent_ = 0.0;
  std::vector<LedgerEntry> ledger_;
};

// Noise draws calibrated against a receipt: laplace(sensitivity) has scale
// sensitivity / receipt-epsilon. In noiseless mode every draw is exactly
// zero and the underlying stream is left untouched.
class NoiseStream {
 public:
  NoiseStream(const SpendReceipt& receipt, Rng& rng)
      : epsilon_(receipt.epsilon()), rng_(rng) {}

  double laplace(double sensitivity);

  // Smooth-sensitivity style draw: scale_numerator / epsilon * cauchy-like z.
  double cauchy(double scale_numerator);

  bool noiseless() const {
    return epsilon_ == std::numeric_limits<double>::infinity();
  }
  double epsilon() const { return epsilon_; }

 private:
  double epsilon_;
  Rng& rng_;
};

}  // namespace privml

#endif  // PRIVML_DP_HPP
