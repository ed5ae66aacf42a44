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

#include "privml/dp.hpp"

#include <cmath>
#include <sstream>

namespace privml {

BudgetExhaustedError::BudgetExhaustedError(const std::string& label,
                                           double requested, double remaining)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "privacy budget exhausted at \"" << label << "\": requested "
           << requested << ", remaining " << remaining;
        return os.str();
      }()),
      label_(label) {}

double Rng::uniform01() {
  // 53-bit mantissa shifted into (0,1): never 0, never 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b, std::uint64_t c) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ (a + 0x1000000000000001ULL));
  s = splitmix64(s ^ (b + 0x2000000000000003ULL));
  s = splitmix64(s ^ (c + 0x3000000000000005ULL));
  return s;
}

double sample_laplace(double scale, Rng& rng) {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("sample_laplace: scale must be positive");
  }
  const double u = rng.uniform01();
  return u < 0.5 ? scale * std::log(2.0 * u) : -scale * std::log(2.0 * (1.0 - u));
}

double sample_cauchy_like(Rng& rng) {
  const double u = rng.uniform01();
  return std::tan(M_PI * (u - 0.5));
}

double laplace_tail_quantile(double scale, double delta) {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("laplace_tail_quantile: scale must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("laplace_tail_quantile: delta must be in (0,1)");
  }
  return scale * std::log(1.0 / (1.0 - delta));
}

PrivacyBudget::PrivacyBudget(double total_epsilon) : total_(total_epsilon) {
  if (!(total_epsilon > 0.0)) {
    throw std::invalid_argument("PrivacyBudget: total epsilon must be positive");
  }
}

SpendReceipt PrivacyBudget::spend(const std::string& label, double epsilon) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("budget spend: epsilon must be positive");
  }
  // An infinite budget absorbs infinite (noiseless-mode) spends.
  if (spent_ + epsilon > total_ && !(std::isinf(total_))) {
    throw BudgetExhaustedError(label, epsilon, total_ - spent_);
  }
  ledger_.push_back({label, epsilon});
  spent_ = std::isinf(epsilon) ? total_ : spent_ + epsilon;
  return SpendReceipt(epsilon);
}

SpendReceipt PrivacyBudget::spend_parallel(
    const std::string& label, const std::vector<double>& epsilons) {
  if (epsilons.empty()) {
    throw std::invalid_argument("budget spend_parallel: empty epsilon list");
  }
  double max_eps = 0.0;
  for (double e : epsilons) {
    if (!(e > 0.0)) {
      throw std::invalid_argument(
          "budget spend_parallel: epsilons must be positive");
    }
    max_eps = std::max(max_eps, e);
  }
  return spend(label, max_eps);
}

double PrivacyBudget::replay() const {
  double sum = 0.0;
  for (const auto& e : ledger_) sum += e.epsilon;
  return std::isinf(sum) ? total_ : sum;
}

double NoiseStream::laplace(double sensitivity) {
  if (!(sensitivity >= 0.0)) {
    throw std::invalid_argument("NoiseStream::laplace: negative sensitivity");
  }
  if (noiseless() || sensitivity == 0.0) return 0.0;
  return sample_laplace(sensitivity / epsilon_, rng_);
}

double NoiseStream::cauchy(double scale_numerator) {
  if (!(scale_numerator >= 0.0)) {
    throw std::invalid_argument("NoiseStream::cauchy: negative scale");
  }
  if (noiseless() || scale_numerator == 0.0) return 0.0;
  return (scale_numerator / epsilon_) * sample_cauchy_like(rng_);
}

}  // namespace privml
