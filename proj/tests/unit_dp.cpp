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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "privml/dp.hpp"
#include "testutil.hpp"

using namespace privml;

TEST_CASE("laplace sampler moments") {
  Rng rng(1234);
  const std::size_t n = 1'000'000;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = sample_laplace(1.0, rng);
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);       // CLT: sd of the mean is sqrt(2/n)
  CHECK(var == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("laplace sampler is a scale family under a shared stream") {
  Rng a(77), b(77);
  for (int i = 0; i < 1000; ++i) {
    const double z1 = sample_laplace(1.0, a);
    const double z2 = sample_laplace(2.0, b);
    CHECK(z2 == doctest::Approx(2.0 * z1).epsilon(1e-12));
  }
}

TEST_CASE("laplace sampler rejects non-positive scale") {
  Rng rng(1);
  CHECK_THROWS_AS(sample_laplace(0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_laplace(-1.0, rng), std::invalid_argument);
}

TEST_CASE("cauchy-like sampler matches its closed form") {
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) {
    const double u = b.uniform01();
    CHECK(sample_cauchy_like(a) == doctest::Approx(std::tan(M_PI * (u - 0.5))));
  }
}

TEST_CASE("cauchy-like sampler median and spread") {
  Rng rng(2024);
  const std::size_t n = 1'000'000;
  std::size_t negative = 0, within_one = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = sample_cauchy_like(rng);
    if (z < 0.0) ++negative;
    if (std::abs(z) <= 1.0) ++within_one;
  }
  // Median 0 and P(|z| <= 1) = 1/2 for the 1/(1+z^2) density.
  CHECK(std::abs(static_cast<double>(negative) / n - 0.5) < 0.01);
  CHECK(std::abs(static_cast<double>(within_one) / n - 0.5) < 0.01);
}

TEST_CASE("laplace tail quantile closed forms") {
  CHECK(laplace_tail_quantile(1.0, 1.0 - std::exp(-1.0)) == doctest::Approx(1.0));
  CHECK(laplace_tail_quantile(1.0, 0.95) == doctest::Approx(std::log(20.0)));
  CHECK(laplace_tail_quantile(3.0, 0.95) == doctest::Approx(3.0 * std::log(20.0)));
  CHECK_THROWS_AS(laplace_tail_quantile(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(laplace_tail_quantile(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(laplace_tail_quantile(0.0, 0.5), std::invalid_argument);
}

TEST_CASE("budget ledger accounts sequential spends") {
  PrivacyBudget b(1.0);
  b.spend("first", 0.5);
  b.spend("second", 0.5);
  CHECK(b.spent() == doctest::Approx(1.0));
  CHECK(b.replay() == doctest::Approx(b.spent()));
  CHECK(b.ledger().size() == 2);
  CHECK(b.ledger()[0].label == "first");
}

TEST_CASE("budget overflow names the offending stage") {
  PrivacyBudget b(1.0);
  b.spend("first", 0.6);
  try {
    b.spend("second", 0.6);
    FAIL("expected budget exhaustion");
  } catch (const BudgetExhaustedError& e) {
    CHECK(e.label() == "second");
    CHECK(std::string(e.what()).find("second") != std::string::npos);
  }
  // The failed spend left no ledger entry behind.
  CHECK(b.ledger().size() == 1);
  CHECK(b.spent() == doctest::Approx(0.6));
}

TEST_CASE("parallel composition debits only the maximum") {
  PrivacyBudget b(1.0);
  b.spend_parallel("group", {0.3, 0.5});
  CHECK(b.spent() == doctest::Approx(0.5));
  CHECK_THROWS_AS(b.spend_parallel("empty", {}), std::invalid_argument);
  PrivacyBudget c(1.0);
  c.spend_parallel("single", {0.4});
  PrivacyBudget d(1.0);
  d.spend("single", 0.4);
  CHECK(c.spent() == d.spent());
}

TEST_CASE("infinite budget supports noiseless receipts") {
  PrivacyBudget b(std::numeric_limits<double>::infinity());
  const SpendReceipt r = b.spend("noiseless", std::numeric_limits<double>::infinity());
  CHECK(r.noiseless());
  Rng rng(5);
  NoiseStream noise(r, rng);
  for (int i = 0; i < 10; ++i) CHECK(noise.laplace(3.0) == 0.0);
  CHECK(noise.cauchy(8.0) == 0.0);
  // The stream was never consumed.
  Rng fresh(5);
  CHECK(rng.next() == fresh.next());
}

TEST_CASE("noise stream calibrates scale to sensitivity over epsilon") {
  PrivacyBudget b(10.0);
  const SpendReceipt r = b.spend("mech", 2.0);
  Rng rng(7), mirror(7);
  NoiseStream noise(r, rng);
  for (int i = 0; i < 100; ++i) {
    const double expect = sample_laplace(3.0 / 2.0, mirror);
    CHECK(noise.laplace(3.0) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("monte-carlo ratio harness sees a plainly non-private mechanism") {
  // Releasing the exact count separates neighbors completely.
  const auto exact_on_5 = [](Rng&) { return std::uint64_t{5}; };
  const auto exact_on_6 = [](Rng&) { return std::uint64_t{6}; };
  const auto r = privml::testing::mc_dp_check(exact_on_5, exact_on_6, 2000, 42);
  CHECK(r.max_ratio > 100.0);
}

TEST_CASE("monte-carlo ratio harness passes the laplace mechanism") {
  // Count query answers 10 vs 11 (one tuple added), eps = 1.
  const double eps = 1.0;
  const auto mech = [&](double truth) {
    return [truth, eps](Rng& rng) {
      const double z = truth + sample_laplace(1.0 / eps, rng);
      // Half-unit bins, clipped to a finite window.
      const double clipped = std::clamp(z, 0.0, 20.0);
      return static_cast<std::uint64_t>(std::floor(clipped * 2.0));
    };
  };
  const auto r = privml::testing::mc_dp_check(mech(10.0), mech(11.0), 100000, 7);
  CHECK(r.max_ratio <= std::exp(eps) * 1.15);
}
