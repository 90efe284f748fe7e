//
// Copyright 2026 The arpdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "arpdp/dp_core.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

namespace arpdp {
namespace {

double LaplaceCdf(double x, double b) {
  return x < 0.0 ? 0.5 * std::exp(x / b) : 1.0 - 0.5 * std::exp(-x / b);
}

double GaussianCdf(double x, double sigma) {
  return 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0)));
}

// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
template <typename Cdf>
double KsStatistic(std::vector<double> samples, Cdf cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  return d;
}

// Critical value of the KS statistic at the 1% level for large n.
double KsCritical1Percent(std::size_t n) {
  return 1.6276236307187293 / std::sqrt(static_cast<double>(n));
}

TEST_CASE("ThresholdRound maps reals to non-negative integers") {
  CHECK(ThresholdRound(-3.7) == 0);
  CHECK(ThresholdRound(0.0) == 0);
  CHECK(ThresholdRound(4.5) == 5);  // Ties round away from zero.
  CHECK(ThresholdRound(12.3) == 12);
  CHECK(ThresholdRound(0.49) == 0);
  CHECK(ThresholdRound(0.5) == 1);
}

TEST_CASE("ThresholdRound is idempotent and monotone") {
  SeededRng rng(41);
  std::vector<double> points;
  for (int i = 0; i < 2000; ++i) {
    points.push_back((rng.UnitOpen() - 0.5) * 200.0);
  }
  std::sort(points.begin(), points.end());
  std::int64_t previous = ThresholdRound(points.front());
  for (double x : points) {
    const std::int64_t rounded = ThresholdRound(x);
    CHECK(ThresholdRound(static_cast<double>(rounded)) == rounded);
    CHECK(rounded >= previous);
    previous = rounded;
  }
}

TEST_CASE("RhoFromEpsDelta matches a high-precision evaluation") {
  // (sqrt(log(100) + 1) - sqrt(log(100)))^2 evaluated at double precision.
  CHECK_THAT(RhoFromEpsDelta(1.0, 0.01),
             Catch::Matchers::WithinRel(0.04908796336007092, 1e-12));
  // Tiny epsilon drives rho to zero.
  CHECK(RhoFromEpsDelta(1e-12, 0.1) < 1e-22);
}

TEST_CASE("EpsFromRhoDelta inverts RhoFromEpsDelta") {
  CHECK(EpsFromRhoDelta(0.0, 0.5) == 0.0);
  CHECK_THAT(EpsFromRhoDelta(RhoFromEpsDelta(2.0, 0.01 / 9025.0),
                             0.01 / 9025.0),
             Catch::Matchers::WithinRel(2.0, 1e-9));
  CHECK_THAT(EpsFromRhoDelta(0.0491, 0.01),
             Catch::Matchers::WithinAbs(1.0, 2e-4));

  SeededRng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double epsilon = rng.UnitOpen() * 16.0;
    const double delta = std::exp(-rng.UnitOpen() * 25.0);  // Down to ~1e-11.
    const double round_trip =
        EpsFromRhoDelta(RhoFromEpsDelta(epsilon, delta), delta);
    CHECK_THAT(round_trip, Catch::Matchers::WithinRel(epsilon, 1e-9));
  }
}

TEST_CASE("RhoFromEpsDelta is strictly increasing in epsilon and delta") {
  const std::vector<double> epsilons = {0.1, 0.5, 1.0, 2.0, 4.0, 8.0};
  const std::vector<double> deltas = {1e-8, 1e-4, 1e-2, 0.1, 0.4};
  for (double delta : deltas) {
    for (std::size_t i = 1; i < epsilons.size(); ++i) {
      CHECK(RhoFromEpsDelta(epsilons[i], delta) >
            RhoFromEpsDelta(epsilons[i - 1], delta));
    }
  }
  for (double epsilon : epsilons) {
    for (std::size_t i = 1; i < deltas.size(); ++i) {
      CHECK(RhoFromEpsDelta(epsilon, deltas[i]) >
            RhoFromEpsDelta(epsilon, deltas[i - 1]));
    }
  }
}

TEST_CASE("Conversion helpers reject domain violations") {
  CHECK_THROWS_AS(RhoFromEpsDelta(0.0, 0.01), ValidationError);
  CHECK_THROWS_AS(RhoFromEpsDelta(1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(RhoFromEpsDelta(1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(EpsFromRhoDelta(-0.1, 0.01), ValidationError);
  CHECK_THROWS_AS(DeltaFromPrime(0.0, PrivacyNotion::kNode, 5),
                  ValidationError);
}

TEST_CASE("DeltaFromPrime divides by the number of protected units") {
  CHECK(DeltaFromPrime(0.01, PrivacyNotion::kNode, 95) == 0.01 / 95.0);
  CHECK(DeltaFromPrime(0.01, PrivacyNotion::kEdge, 95) == 0.01 / 9025.0);
  CHECK(DeltaFromPrime(0.37, PrivacyNotion::kNode, 1) == 0.37);
}

TEST_CASE("Gaussian budget derives the composed noise scale") {
  // Solve for the epsilon whose rho comes out at 0.6, then check the
  // variance formula t/(2 rho) end to end: sqrt(30 / 1.2) = 5.
  PrivacyParams params;
  params.delta_prime = 0.01;
  params.user_count = 1;  // delta = delta_prime.
  params.t = 30;
  params.notion = PrivacyNotion::kNode;
  params.epsilon = EpsFromRhoDelta(0.6, 0.01);
  const DerivedBudget budget = DeriveGaussianBudget(params);
  CHECK_THAT(budget.rho, Catch::Matchers::WithinRel(0.6, 1e-12));
  CHECK_THAT(budget.per_interval_scale,
             Catch::Matchers::WithinRel(5.0, 1e-12));
}

TEST_CASE("Pure budget splits epsilon across intervals") {
  PrivacyParams params;
  params.epsilon = 5.0;
  params.t = 30;
  const DerivedBudget budget = DerivePureBudget(params);
  CHECK(budget.per_interval_scale == 6.0);
  CHECK(budget.delta == 0.0);
  CHECK(budget.rho == 0.0);
}

TEST_CASE("SampleLaplace is deterministic given the rng state") {
  SeededRng a(123);
  SeededRng b(123);
  for (int i = 0; i < 100; ++i) {
    CHECK(SampleLaplace(1.0, a) == SampleLaplace(1.0, b));
  }
  CHECK_THROWS_AS(SampleLaplace(0.0, a), ValidationError);
  CHECK_THROWS_AS(SampleLaplace(-1.0, a), ValidationError);
}

TEST_CASE("SampleGaussian is deterministic given the rng state") {
  SeededRng a(99);
  SeededRng b(99);
  for (int i = 0; i < 100; ++i) {
    CHECK(SampleGaussian(2.5, a) == SampleGaussian(2.5, b));
  }
  CHECK_THROWS_AS(SampleGaussian(0.0, a), ValidationError);
}

TEST_CASE("Laplace draws have the right moments") {
  constexpr std::size_t kDraws = 1'000'000;
  SeededRng rng(2026);

  SECTION("mean at scale 2 sits within +/- 0.02 of zero") {
    double sum = 0.0;
    for (std::size_t i = 0; i < kDraws; ++i) sum += SampleLaplace(2.0, rng);
    CHECK(std::abs(sum / kDraws) < 0.02);
  }

  SECTION("standard deviation at scale 6 is close to 6*sqrt(2)") {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < kDraws; ++i) {
      const double x = SampleLaplace(6.0, rng);
      sum += x;
      sum_sq += x * x;
    }
    const double mean = sum / kDraws;
    const double stddev = std::sqrt(sum_sq / kDraws - mean * mean);
    CHECK_THAT(stddev, Catch::Matchers::WithinRel(6.0 * std::sqrt(2.0), 0.01));
  }
}

TEST_CASE("Gaussian draws have the right variance") {
  constexpr std::size_t kDraws = 1'000'000;
  SeededRng rng(2027);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < kDraws; ++i) {
    const double x = SampleGaussian(3.0, rng);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / kDraws;
  const double variance = sum_sq / kDraws - mean * mean;
  CHECK_THAT(variance, Catch::Matchers::WithinRel(9.0, 0.01));
}

TEST_CASE("Samplers pass a KS goodness-of-fit test at the 1% level") {
  constexpr std::size_t kDraws = 100'000;

  SECTION("Laplace(2)") {
    SeededRng rng(31337);
    std::vector<double> samples(kDraws);
    for (double& s : samples) s = SampleLaplace(2.0, rng);
    CHECK(KsStatistic(std::move(samples), [](double x) {
            return LaplaceCdf(x, 2.0);
          }) < KsCritical1Percent(kDraws));
  }

  SECTION("N(0, 9)") {
    SeededRng rng(31338);
    std::vector<double> samples(kDraws);
    for (double& s : samples) s = SampleGaussian(3.0, rng);
    CHECK(KsStatistic(std::move(samples), [](double x) {
            return GaussianCdf(x, 3.0);
          }) < KsCritical1Percent(kDraws));
  }
}

TEST_CASE("Laplace density ratios respect the per-interval budget") {
  // For outputs shifted by at most the unit sensitivity, the density ratio
  // at scale 1/epsilon0 stays within e^epsilon0 everywhere.
  auto log_pdf = [](double x, double b) { return -std::abs(x) / b; };
  for (double epsilon0 : {0.5, 1.0, 2.0}) {
    const double b = 1.0 / epsilon0;
    for (double shift : {-1.0, -0.5, 0.25, 1.0}) {
      for (int i = -400; i <= 400; ++i) {
        const double x = 0.05 * i;
        const double log_ratio =
            log_pdf(x, b) - log_pdf(x - shift, b);
        CHECK(log_ratio <= epsilon0 * std::abs(shift) + 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace arpdp
