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

#ifndef ARPDP_MECHANISMS_HPP_
#define ARPDP_MECHANISMS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arpdp/degree.hpp"
#include "arpdp/dp_core.hpp"
#include "arpdp/error.hpp"
#include "arpdp/ingest.hpp"
#include "arpdp/rng.hpp"

namespace arpdp {

// The release algorithms. The naive pair privatizes per-interval degree
// sums and protects edges; the histogram pair privatizes per-interval
// degree histograms, whose unit sensitivity to dropping a user makes node
// protection affordable. The *Delta variants trade a delta-sized failure
// probability for Gaussian noise that composes with sqrt(t) growth instead
// of the Laplace pair's linear t.
//
// kNaiveNodeInfeasible is the degree-sum release recalibrated for node
// protection; its Laplace scale t*n/epsilon drowns any realistic LAN and it
// exists only to demonstrate that, behind an explicit opt-in.
enum class Mechanism {
  kNaive,
  kHistogram,
  kNaiveDelta,
  kHistogramDelta,
  kNaiveNodeInfeasible,
};

inline std::string ToString(Mechanism m) {
  switch (m) {
    case Mechanism::kNaive:
      return "naive";
    case Mechanism::kHistogram:
      return "histogram";
    case Mechanism::kNaiveDelta:
      return "naive-delta";
    case Mechanism::kHistogramDelta:
      return "histogram-delta";
    case Mechanism::kNaiveNodeInfeasible:
      return "naive-node-infeasible";
  }
  return "unknown";
}

inline Mechanism MechanismFromString(const std::string& s) {
  if (s == "naive") return Mechanism::kNaive;
  if (s == "histogram") return Mechanism::kHistogram;
  if (s == "naive-delta") return Mechanism::kNaiveDelta;
  if (s == "histogram-delta") return Mechanism::kHistogramDelta;
  if (s == "naive-node-infeasible") return Mechanism::kNaiveNodeInfeasible;
  throw ValidationError("unknown mechanism: \"" + s + "\"");
}

inline PrivacyNotion NotionFor(Mechanism m) {
  switch (m) {
    case Mechanism::kNaive:
    case Mechanism::kNaiveDelta:
      return PrivacyNotion::kEdge;
    default:
      return PrivacyNotion::kNode;
  }
}

inline bool IsHistogramMechanism(Mechanism m) {
  return m == Mechanism::kHistogram || m == Mechanism::kHistogramDelta;
}

inline bool IsDeltaMechanism(Mechanism m) {
  return m == Mechanism::kNaiveDelta || m == Mechanism::kHistogramDelta;
}

// Full parameterization attached to every released series, enough to re-run
// the release bit-for-bit on the same input.
struct ParamsEcho {
  std::string mechanism;
  std::string notion;
  double epsilon = 0.0;
  std::optional<double> delta_prime;
  std::optional<double> delta;  // Derived; delta mechanisms only.
  std::optional<double> rho;    // Derived; delta mechanisms only.
  double per_interval_scale = 0.0;
  int t = 0;
  std::size_t user_count = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> bin_labels;  // Histogram mechanisms only.
};

struct ReleaseRequest {
  std::vector<IntervalGraph> graphs;  // Length params.t.
  PrivacyParams params;
  Mechanism mechanism = Mechanism::kNaive;
  BinSpec bin_spec;  // Used by the histogram mechanisms.
  std::uint64_t seed = 0;
  bool allow_infeasible = false;

  void Validate() const {
    params.Validate();
    if (graphs.size() != static_cast<std::size_t>(params.t)) {
      throw ValidationError("got " + std::to_string(graphs.size()) +
                            " interval graphs for t = " +
                            std::to_string(params.t));
    }
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      // Interval ordinals select the noise streams; they must be 1..t.
      if (graphs[i].index != static_cast<int>(i) + 1) {
        throw ValidationError("interval graph " + std::to_string(i) +
                              " has ordinal " +
                              std::to_string(graphs[i].index) +
                              ", expected " + std::to_string(i + 1));
      }
    }
    if (params.notion != NotionFor(mechanism)) {
      throw ValidationError("mechanism " + ToString(mechanism) +
                            " releases under the " +
                            ToString(NotionFor(mechanism)) +
                            " notion, not " + ToString(params.notion));
    }
    if (IsDeltaMechanism(mechanism) && !params.delta_prime.has_value()) {
      throw ValidationError("mechanism " + ToString(mechanism) +
                            " requires delta_prime");
    }
    if (IsHistogramMechanism(mechanism)) bin_spec.Validate();
    if (mechanism == Mechanism::kNaiveNodeInfeasible && !allow_infeasible) {
      throw ValidationError(
          "naive-node-infeasible adds Laplace noise of scale t*n/epsilon; "
          "pass allow_infeasible to run it anyway");
    }
  }
};

struct ReleasedSeries {
  enum class Kind { kScalar, kHistogram };
  Kind kind = Kind::kScalar;
  std::vector<std::int64_t> scalar;                  // Per interval.
  std::vector<std::vector<std::int64_t>> histogram;  // Per interval, per bin.
  ParamsEcho params_echo;
};

namespace detail {

inline ParamsEcho MakeEcho(const ReleaseRequest& req,
                           const DerivedBudget& budget) {
  ParamsEcho echo;
  echo.mechanism = ToString(req.mechanism);
  echo.notion = ToString(req.params.notion);
  echo.epsilon = req.params.epsilon;
  echo.delta_prime = req.params.delta_prime;
  if (IsDeltaMechanism(req.mechanism)) {
    echo.delta = budget.delta;
    echo.rho = budget.rho;
  }
  echo.per_interval_scale = budget.per_interval_scale;
  echo.t = req.params.t;
  echo.user_count = req.params.user_count;
  echo.seed = req.seed;
  if (IsHistogramMechanism(req.mechanism)) {
    echo.bin_labels = req.bin_spec.Labels();
  }
  return echo;
}

// Scalar release: one noisy, threshold-rounded degree sum per interval.
// Interval j draws from stream (seed, j) so intervals are independent and
// reruns reproduce regardless of evaluation order.
template <typename NoiseFn>
ReleasedSeries ReleaseScalar(const ReleaseRequest& req,
                             const DerivedBudget& budget, NoiseFn&& noise) {
  ReleasedSeries out;
  out.kind = ReleasedSeries::Kind::kScalar;
  out.scalar.reserve(req.graphs.size());
  for (const IntervalGraph& g : req.graphs) {
    SeededRng rng =
        SeededRng::Stream(req.seed, static_cast<std::uint64_t>(g.index));
    const double noisy = static_cast<double>(DegreeSum(g)) + noise(rng);
    out.scalar.push_back(ThresholdRound(noisy));
  }
  out.params_echo = MakeEcho(req, budget);
  return out;
}

// Histogram release: per interval, each bin count gets an independent noise
// draw, consumed in bin order from that interval's stream.
template <typename NoiseFn>
ReleasedSeries ReleaseHistogramSeries(const ReleaseRequest& req,
                                      const DerivedBudget& budget,
                                      NoiseFn&& noise) {
  ReleasedSeries out;
  out.kind = ReleasedSeries::Kind::kHistogram;
  out.histogram.reserve(req.graphs.size());
  for (const IntervalGraph& g : req.graphs) {
    SeededRng rng =
        SeededRng::Stream(req.seed, static_cast<std::uint64_t>(g.index));
    const DegreeHistogram hist = ComputeDegreeHistogram(g, req.bin_spec);
    std::vector<std::int64_t> row;
    row.reserve(hist.counts.size());
    for (std::int64_t count : hist.counts) {
      row.push_back(ThresholdRound(static_cast<double>(count) + noise(rng)));
    }
    out.histogram.push_back(std::move(row));
  }
  out.params_echo = MakeEcho(req, budget);
  return out;
}

}  // namespace detail

// Dispatches to the release algorithm named in the request. All outputs are
// non-negative integers; series length always matches t and histogram rows
// always match the bin spec.
inline ReleasedSeries Release(const ReleaseRequest& req) {
  req.Validate();
  switch (req.mechanism) {
    case Mechanism::kNaive: {
      const DerivedBudget budget = DerivePureBudget(req.params);
      const double scale = budget.per_interval_scale;
      return detail::ReleaseScalar(
          req, budget, [scale](SeededRng& rng) {
            return SampleLaplace(scale, rng);
          });
    }
    case Mechanism::kHistogram: {
      const DerivedBudget budget = DerivePureBudget(req.params);
      const double scale = budget.per_interval_scale;
      return detail::ReleaseHistogramSeries(
          req, budget, [scale](SeededRng& rng) {
            return SampleLaplace(scale, rng);
          });
    }
    case Mechanism::kNaiveDelta: {
      const DerivedBudget budget = DeriveGaussianBudget(req.params);
      const double stddev = budget.per_interval_scale;
      return detail::ReleaseScalar(
          req, budget, [stddev](SeededRng& rng) {
            return SampleGaussian(stddev, rng);
          });
    }
    case Mechanism::kHistogramDelta: {
      const DerivedBudget budget = DeriveGaussianBudget(req.params);
      const double stddev = budget.per_interval_scale;
      return detail::ReleaseHistogramSeries(
          req, budget, [stddev](SeededRng& rng) {
            return SampleGaussian(stddev, rng);
          });
    }
    case Mechanism::kNaiveNodeInfeasible: {
      // Degree sums move by up to n when a node disappears, so node
      // protection on the scalar path needs scale t*n/epsilon.
      DerivedBudget budget = DerivePureBudget(req.params);
      budget.per_interval_scale *=
          static_cast<double>(req.params.user_count);
      const double scale = budget.per_interval_scale;
      return detail::ReleaseScalar(
          req, budget, [scale](SeededRng& rng) {
            return SampleLaplace(scale, rng);
          });
    }
  }
  throw ValidationError("unreachable mechanism");
}

inline ReleasedSeries ReleaseNaive(const ReleaseRequest& req) {
  if (req.mechanism != Mechanism::kNaive) {
    throw ValidationError("ReleaseNaive called with mechanism " +
                          ToString(req.mechanism));
  }
  return Release(req);
}

inline ReleasedSeries ReleaseHistogram(const ReleaseRequest& req) {
  if (req.mechanism != Mechanism::kHistogram) {
    throw ValidationError("ReleaseHistogram called with mechanism " +
                          ToString(req.mechanism));
  }
  return Release(req);
}

inline ReleasedSeries ReleaseNaiveDelta(const ReleaseRequest& req) {
  if (req.mechanism != Mechanism::kNaiveDelta) {
    throw ValidationError("ReleaseNaiveDelta called with mechanism " +
                          ToString(req.mechanism));
  }
  return Release(req);
}

inline ReleasedSeries ReleaseHistogramDelta(const ReleaseRequest& req) {
  if (req.mechanism != Mechanism::kHistogramDelta) {
    throw ValidationError("ReleaseHistogramDelta called with mechanism " +
                          ToString(req.mechanism));
  }
  return Release(req);
}

}  // namespace arpdp

#endif  // ARPDP_MECHANISMS_HPP_
