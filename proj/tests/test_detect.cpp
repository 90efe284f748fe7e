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

#include "arpdp/detect.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "arpdp/rng.hpp"

namespace arpdp {
namespace {

TEST_CASE("L1Series collapses histogram pairs") {
  SECTION("a constant series maps to zeros") {
    const std::vector<std::vector<std::int64_t>> rows(7, {3, 1, 4});
    const std::vector<double> out = L1Series(rows);
    REQUIRE(out.size() == 6);
    for (double v : out) CHECK(v == 0.0);
  }

  SECTION("componentwise absolute differences add up") {
    const std::vector<std::vector<std::int64_t>> rows = {{0, 2, 0},
                                                         {1, 0, 3}};
    CHECK(L1Series(rows) == std::vector<double>{6.0});
  }

  SECTION("t histograms give t-1 values") {
    const std::vector<std::vector<std::int64_t>> rows(30, {1, 2, 3});
    CHECK(L1Series(rows).size() == 29);
  }

  SECTION("arity mismatches and short series are rejected") {
    CHECK_THROWS_AS(L1Series({{1, 2}, {1, 2, 3}}), ValidationError);
    CHECK_THROWS_AS(L1Series({{1, 2, 3}}), ValidationError);
  }
}

TEST_CASE("L1Series is non-negative and zero only on equal neighbors") {
  SeededRng rng(64);
  for (int round = 0; round < 40; ++round) {
    std::vector<std::vector<std::int64_t>> rows;
    const std::size_t t = 2 + rng.Below(8);
    for (std::size_t i = 0; i < t; ++i) {
      rows.push_back({static_cast<std::int64_t>(rng.Below(4)),
                      static_cast<std::int64_t>(rng.Below(4)),
                      static_cast<std::int64_t>(rng.Below(4))});
    }
    const std::vector<double> out = L1Series(rows);
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK(out[i] >= 0.0);
      CHECK((out[i] == 0.0) == (rows[i] == rows[i + 1]));
    }
  }
}

TEST_CASE("A constant series raises no flags") {
  const std::vector<double> series(20, 42.0);
  const AnomalyLabels out = EwmaDetect(series, DetectorParams{});
  REQUIRE(out.labels.size() == 20);
  for (bool flag : out.labels) CHECK(!flag);
  for (double score : out.scores) CHECK(score == 0.0);
}

TEST_CASE("A lone spike is flagged and absorbed") {
  // Flat at 10 with one interval at 1000. Before the spike the running
  // variance is zero, so the spike deviates by 990 over the floored
  // standard deviation; afterwards the inflated variance swallows the
  // return to baseline.
  std::vector<double> series(16, 10.0);
  series[10] = 1000.0;
  DetectorParams params;
  params.lambda = 0.25;
  params.k = 3.0;
  params.warmup = 4;
  const AnomalyLabels out = EwmaDetect(series, params);
  for (std::size_t i = 0; i < out.labels.size(); ++i) {
    CHECK(out.labels[i] == (i == 10));
  }
  CHECK(out.scores[10] > 1000.0);
  CHECK(out.scores[11] < 0.0);  // Falling back toward baseline.
}

TEST_CASE("Warmup suppresses early flags") {
  std::vector<double> series(10, 5.0);
  series[2] = 900.0;
  DetectorParams params;
  params.warmup = 4;
  const AnomalyLabels out = EwmaDetect(series, params);
  CHECK(!out.labels[2]);  // Interval 3 is inside the warmup.
  CHECK(std::abs(out.scores[2]) > 0.0);  // Scores still reported.
}

TEST_CASE("An infinite control limit never flags") {
  std::vector<double> series = {1, 9, 2, 8, 3, 700, 4, 6};
  DetectorParams params;
  params.k = std::numeric_limits<double>::infinity();
  for (bool flag : EwmaDetect(series, params).labels) CHECK(!flag);
}

TEST_CASE("Flag patterns are invariant under positive scaling") {
  SeededRng rng(77);
  DetectorParams params;
  for (int round = 0; round < 30; ++round) {
    std::vector<double> series;
    const std::size_t t = 8 + rng.Below(20);
    for (std::size_t i = 0; i < t; ++i) {
      series.push_back(static_cast<double>(rng.Below(12)));
    }
    if (rng.Below(2) == 0) {
      series[4 + rng.Below(t - 4)] += 200.0;
    }
    const AnomalyLabels reference = EwmaDetect(series, params);
    for (double c : {0.01, 0.5, 3.0, 100.0}) {
      std::vector<double> scaled = series;
      for (double& x : scaled) x *= c;
      CHECK(EwmaDetect(scaled, params).labels == reference.labels);
    }
  }
}

TEST_CASE("Detector validates its inputs") {
  CHECK_THROWS_AS(EwmaDetect({}, DetectorParams{}), ValidationError);
  DetectorParams params;
  params.lambda = 0.0;
  CHECK_THROWS_AS(EwmaDetect({1.0}, params), ValidationError);
  params = DetectorParams{};
  params.lambda = 1.5;
  CHECK_THROWS_AS(EwmaDetect({1.0}, params), ValidationError);
  params = DetectorParams{};
  params.k = -1.0;
  CHECK_THROWS_AS(EwmaDetect({1.0}, params), ValidationError);
  params = DetectorParams{};
  params.warmup = 0;
  CHECK_THROWS_AS(EwmaDetect({1.0}, params), ValidationError);
}

}  // namespace
}  // namespace arpdp
