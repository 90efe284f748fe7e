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

#ifndef ARPDP_EVALUATE_HPP_
#define ARPDP_EVALUATE_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arpdp/degree.hpp"
#include "arpdp/detect.hpp"
#include "arpdp/error.hpp"
#include "arpdp/ingest.hpp"
#include "arpdp/mechanisms.hpp"
#include "arpdp/rng.hpp"

namespace arpdp {

inline double Rmse(const std::vector<double>& released,
                   const std::vector<double>& reference) {
  if (released.size() != reference.size() || released.empty()) {
    throw ValidationError("RMSE needs two equal-length non-empty series");
  }
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < released.size(); ++i) {
    const double diff = released[i] - reference[i];
    sum_sq += diff * diff;
  }
  return std::sqrt(sum_sq / static_cast<double>(released.size()));
}

// RMSE over all (interval, bin) cells of two histogram series.
inline double RmseCells(const std::vector<std::vector<std::int64_t>>& released,
                        const std::vector<std::vector<std::int64_t>>& reference) {
  if (released.size() != reference.size() || released.empty()) {
    throw ValidationError("RMSE needs two equal-length non-empty series");
  }
  double sum_sq = 0.0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < released.size(); ++i) {
    if (released[i].size() != reference[i].size()) {
      throw ValidationError("histogram rows disagree on bin count");
    }
    for (std::size_t b = 0; b < released[i].size(); ++b) {
      const double diff =
          static_cast<double>(released[i][b] - reference[i][b]);
      sum_sq += diff * diff;
      ++cells;
    }
  }
  if (cells == 0) throw ValidationError("histogram series has no cells");
  return std::sqrt(sum_sq / static_cast<double>(cells));
}

struct Confusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t Total() const { return tp + fp + tn + fn; }
  Confusion& operator+=(const Confusion& other) {
    tp += other.tp;
    fp += other.fp;
    tn += other.tn;
    fn += other.fn;
    return *this;
  }
};

// Per-interval 2x2 tally of the privatized pipeline's verdicts against the
// raw pipeline's verdicts on the same data. The raw labels are the
// reference: a true positive is an interval both pipelines call anomalous.
inline Confusion ConfusionCounts(const AnomalyLabels& privatized,
                                 const AnomalyLabels& raw) {
  if (privatized.labels.size() != raw.labels.size()) {
    throw ValidationError("label series lengths differ");
  }
  Confusion c;
  for (std::size_t i = 0; i < raw.labels.size(); ++i) {
    const bool p = privatized.labels[i];
    const bool r = raw.labels[i];
    if (p && r) ++c.tp;
    else if (p && !r) ++c.fp;
    else if (!p && r) ++c.fn;
    else ++c.tn;
  }
  return c;
}

// TPR = TP / (TP + FN); F1 = TP / (TP + (FP + FN)/2). A zero denominator
// leaves the metric unset ("n/a" downstream) rather than forcing 0 or 1.
struct UtilityScores {
  std::optional<double> tpr;
  std::optional<double> f1;
};

inline UtilityScores ComputeUtilityScores(const Confusion& c) {
  UtilityScores scores;
  if (c.tp + c.fn > 0) {
    scores.tpr = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  }
  const double f1_denominator =
      static_cast<double>(c.tp) + 0.5 * static_cast<double>(c.fp + c.fn);
  if (f1_denominator > 0.0) {
    scores.f1 = static_cast<double>(c.tp) / f1_denominator;
  }
  return scores;
}

// Percentage RMSE reduction of a variant relative to a baseline; negative
// values mean the variant lost utility.
inline double UtilityGain(double rmse_base, double rmse_variant) {
  if (!(rmse_base > 0.0)) {
    throw ValidationError("utility gain needs a positive baseline RMSE");
  }
  return 100.0 * (rmse_base - rmse_variant) / rmse_base;
}

// One seed's worth of comparison between the raw and privatized pipelines.
struct CellOutcome {
  double rmse = 0.0;
  Confusion confusion;
  UtilityScores scores;
};

// Runs one mechanism configuration on fixed input graphs with one seed and
// compares against the non-private pipeline: RMSE on the released values,
// and detector agreement on the detector-ready series. For the naive pair
// that series is the degree sums; for the histogram pair both sides go
// through the L1 transform first, the raw side on the exact histograms.
inline CellOutcome EvaluateCell(const std::vector<IntervalGraph>& graphs,
                                Mechanism mechanism, double epsilon,
                                std::optional<double> delta_prime,
                                std::size_t user_count, std::uint64_t seed,
                                const DetectorParams& detector,
                                const BinSpec& bin_spec) {
  ReleaseRequest req;
  req.graphs = graphs;
  req.params.epsilon = epsilon;
  req.params.delta_prime = delta_prime;
  req.params.t = static_cast<int>(graphs.size());
  req.params.notion = NotionFor(mechanism);
  req.params.user_count = user_count;
  req.mechanism = mechanism;
  req.bin_spec = bin_spec;
  req.seed = seed;
  const ReleasedSeries released = Release(req);

  CellOutcome outcome;
  if (released.kind == ReleasedSeries::Kind::kScalar) {
    std::vector<double> raw;
    std::vector<double> noisy;
    raw.reserve(graphs.size());
    noisy.reserve(graphs.size());
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      raw.push_back(static_cast<double>(DegreeSum(graphs[i])));
      noisy.push_back(static_cast<double>(released.scalar[i]));
    }
    outcome.rmse = Rmse(noisy, raw);
    const AnomalyLabels raw_labels = EwmaDetect(raw, detector);
    const AnomalyLabels priv_labels = EwmaDetect(noisy, detector);
    outcome.confusion = ConfusionCounts(priv_labels, raw_labels);
  } else {
    std::vector<std::vector<std::int64_t>> raw_rows;
    raw_rows.reserve(graphs.size());
    for (const IntervalGraph& g : graphs) {
      raw_rows.push_back(ComputeDegreeHistogram(g, bin_spec).counts);
    }
    outcome.rmse = RmseCells(released.histogram, raw_rows);
    const AnomalyLabels raw_labels = EwmaDetect(L1Series(raw_rows), detector);
    const AnomalyLabels priv_labels =
        EwmaDetect(L1Series(released.histogram), detector);
    outcome.confusion = ConfusionCounts(priv_labels, raw_labels);
  }
  outcome.scores = ComputeUtilityScores(outcome.confusion);
  return outcome;
}

// Aggregate of one (mechanism, epsilon, delta_prime) grid cell over seeds.
// tpr/f1 means skip seeds where the metric was undefined; the confusion
// counts are summed, so their total is (seeds) x (compared intervals).
struct UtilityReport {
  std::string mechanism;
  double epsilon = 0.0;
  std::optional<double> delta_prime;
  std::size_t seeds = 0;
  double rmse_mean = 0.0;
  double rmse_std = 0.0;
  Confusion confusion;
  std::optional<double> tpr_mean;
  std::optional<double> f1_mean;
  std::optional<std::string> error;  // Set when the cell was invalid.
};

struct SweepConfig {
  SynthSpec scenario;
  std::vector<Mechanism> mechanisms;
  std::vector<double> epsilons;
  // Applied to the delta mechanisms only; the pure mechanisms ignore it and
  // contribute one row per epsilon.
  std::vector<double> delta_primes{0.01};
  std::vector<std::uint64_t> seeds;
  DetectorParams detector;
  BinSpec bin_spec;

  void Validate() const {
    scenario.Validate();
    detector.Validate();
    bin_spec.Validate();
    if (mechanisms.empty() || epsilons.empty() || seeds.empty()) {
      throw ValidationError("sweep grid is empty");
    }
    if (delta_primes.empty()) {
      throw ValidationError("sweep needs at least one delta_prime");
    }
  }
};

namespace detail {

inline UtilityReport AggregateCell(const std::vector<IntervalGraph>& graphs,
                                   Mechanism mechanism, double epsilon,
                                   std::optional<double> delta_prime,
                                   std::size_t user_count,
                                   const std::vector<std::uint64_t>& seeds,
                                   const DetectorParams& detector,
                                   const BinSpec& bin_spec) {
  UtilityReport report;
  report.mechanism = ToString(mechanism);
  report.epsilon = epsilon;
  report.delta_prime = delta_prime;
  report.seeds = seeds.size();

  std::vector<double> rmses;
  std::vector<double> tprs;
  std::vector<double> f1s;
  rmses.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    const CellOutcome outcome =
        EvaluateCell(graphs, mechanism, epsilon, delta_prime, user_count,
                     seed, detector, bin_spec);
    rmses.push_back(outcome.rmse);
    report.confusion += outcome.confusion;
    if (outcome.scores.tpr) tprs.push_back(*outcome.scores.tpr);
    if (outcome.scores.f1) f1s.push_back(*outcome.scores.f1);
  }

  double sum = 0.0;
  for (double r : rmses) sum += r;
  report.rmse_mean = sum / static_cast<double>(rmses.size());
  double var = 0.0;
  for (double r : rmses) {
    var += (r - report.rmse_mean) * (r - report.rmse_mean);
  }
  report.rmse_std = std::sqrt(var / static_cast<double>(rmses.size()));
  auto mean_of = [](const std::vector<double>& xs) -> std::optional<double> {
    if (xs.empty()) return std::nullopt;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
  };
  report.tpr_mean = mean_of(tprs);
  report.f1_mean = mean_of(f1s);
  return report;
}

}  // namespace detail

// Grid sweep over pre-built interval graphs. Invalid cells (e.g. a series
// too short for the detector) come back as reports with `error` set instead
// of aborting the sweep. Output order is mechanism-major, then epsilon,
// then delta_prime.
inline std::vector<UtilityReport> SweepGraphs(
    const std::vector<IntervalGraph>& graphs, std::size_t user_count,
    const std::vector<Mechanism>& mechanisms,
    const std::vector<double>& epsilons,
    const std::vector<double>& delta_primes,
    const std::vector<std::uint64_t>& seeds, const DetectorParams& detector,
    const BinSpec& bin_spec) {
  if (mechanisms.empty() || epsilons.empty() || seeds.empty() ||
      delta_primes.empty()) {
    throw ValidationError("sweep grid is empty");
  }
  std::vector<UtilityReport> reports;
  for (Mechanism mechanism : mechanisms) {
    for (double epsilon : epsilons) {
      const std::vector<double> dp_choices =
          IsDeltaMechanism(mechanism) ? delta_primes
                                      : std::vector<double>{0.0};
      for (double dp : dp_choices) {
        const std::optional<double> delta_prime =
            IsDeltaMechanism(mechanism) ? std::optional<double>(dp)
                                        : std::nullopt;
        try {
          reports.push_back(detail::AggregateCell(graphs, mechanism, epsilon,
                                                  delta_prime, user_count,
                                                  seeds, detector, bin_spec));
        } catch (const ValidationError& e) {
          UtilityReport failed;
          failed.mechanism = ToString(mechanism);
          failed.epsilon = epsilon;
          failed.delta_prime = delta_prime;
          failed.seeds = seeds.size();
          failed.error = e.what();
          reports.push_back(std::move(failed));
        }
      }
    }
  }
  return reports;
}

// Runs the grid on one fixed synthetic scenario, aggregating each cell over
// the seed list.
inline std::vector<UtilityReport> Sweep(const SweepConfig& config) {
  config.Validate();
  return SweepGraphs(SynthScenario(config.scenario),
                     config.scenario.user_count, config.mechanisms,
                     config.epsilons, config.delta_primes, config.seeds,
                     config.detector, config.bin_spec);
}

}  // namespace arpdp

#endif  // ARPDP_EVALUATE_HPP_
