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

#ifndef ARPDP_DETECT_HPP_
#define ARPDP_DETECT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "arpdp/error.hpp"

namespace arpdp {

// EWMA control-chart settings. Defaults are standard chart choices; they are
// deliberately configurable because the detector is the yardstick for
// utility comparisons, not a tuned product in itself.
struct DetectorParams {
  double lambda = 0.25;  // Smoothing weight in (0, 1].
  double k = 3.0;        // Control-limit multiplier, >= 0 (may be +inf).
  int warmup = 4;        // Intervals before flagging is allowed.
  double variance_floor = 1e-6;

  void Validate() const {
    if (!(lambda > 0.0 && lambda <= 1.0)) {
      throw ValidationError("lambda must lie in (0, 1]");
    }
    if (!(k >= 0.0)) throw ValidationError("k must be >= 0");
    if (warmup < 1) throw ValidationError("warmup must be >= 1");
    if (!(variance_floor > 0.0)) {
      throw ValidationError("variance_floor must be > 0");
    }
  }
};

// Per-interval verdicts plus the standardized deviations they came from.
struct AnomalyLabels {
  std::vector<bool> labels;
  std::vector<double> scores;
};

// Collapses a histogram series to a scalar one by taking the L1 distance of
// consecutive rows: output[i] = sum_bins |row[i] - row[i+1]|, one value per
// adjacent pair, so t rows give t-1 values.
inline std::vector<double> L1Series(
    const std::vector<std::vector<std::int64_t>>& rows) {
  if (rows.size() < 2) {
    throw ValidationError("L1 transform needs at least 2 histograms");
  }
  const std::size_t arity = rows.front().size();
  for (const auto& row : rows) {
    if (row.size() != arity) {
      throw ValidationError("histogram rows disagree on bin count");
    }
  }
  std::vector<double> out;
  out.reserve(rows.size() - 1);
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    std::int64_t dist = 0;
    for (std::size_t b = 0; b < arity; ++b) {
      dist += std::llabs(rows[i][b] - rows[i + 1][b]);
    }
    out.push_back(static_cast<double>(dist));
  }
  return out;
}

// Flags interval i when the new value deviates from the running mean by
// more than k running standard deviations:
//   m_i = lambda*x_i + (1-lambda)*m_{i-1}        m_0 = x_1
//   v_i = lambda*(x_i - m_{i-1})^2 + (1-lambda)*v_{i-1}   v_0 = 0
// The deviation test uses the mean/variance state from *before* interval i,
// with the variance floored so early all-constant stretches don't divide by
// zero. Two-sided, since degree collapses are as suspicious as spikes.
// Flagging starts after the warmup; scores are reported everywhere.
inline AnomalyLabels EwmaDetect(const std::vector<double>& series,
                                const DetectorParams& params) {
  params.Validate();
  if (series.empty()) throw ValidationError("detector input is empty");
  AnomalyLabels out;
  out.labels.reserve(series.size());
  out.scores.reserve(series.size());
  double mean = series.front();
  double variance = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double x = series[i];
    const double deviation = x - mean;
    const double sd = std::sqrt(std::max(variance, params.variance_floor));
    const double score = deviation / sd;
    const bool after_warmup =
        static_cast<int>(i) + 1 > params.warmup;  // Intervals are 1-based.
    out.labels.push_back(after_warmup && std::abs(deviation) > params.k * sd);
    out.scores.push_back(score);
    variance = params.lambda * deviation * deviation +
               (1.0 - params.lambda) * variance;
    mean = params.lambda * x + (1.0 - params.lambda) * mean;
  }
  return out;
}

}  // namespace arpdp

#endif  // ARPDP_DETECT_HPP_
