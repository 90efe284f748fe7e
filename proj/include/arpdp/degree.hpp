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

#ifndef ARPDP_DEGREE_HPP_
#define ARPDP_DEGREE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arpdp/error.hpp"
#include "arpdp/ingest.hpp"

namespace arpdp {

// Degree histogram binning: lower_bounds[i] starts bin i, bin i covers
// degrees [lower_bounds[i], lower_bounds[i+1]) and the last bin is
// unbounded above. The default groups users by degree 1, 2 and >= 3;
// degree-0 users are never counted.
struct BinSpec {
  std::vector<std::int64_t> lower_bounds{1, 2, 3};

  static BinSpec Default3() { return BinSpec{}; }

  std::size_t size() const { return lower_bounds.size(); }

  void Validate() const {
    if (lower_bounds.empty()) throw ValidationError("bin spec is empty");
    if (lower_bounds.front() < 1) {
      throw ValidationError("bins start at degree >= 1");
    }
    for (std::size_t i = 1; i < lower_bounds.size(); ++i) {
      if (lower_bounds[i] <= lower_bounds[i - 1]) {
        throw ValidationError("bin lower bounds must be strictly increasing");
      }
    }
  }

  // Bin index for a degree, or nullopt when the degree falls below the
  // first bin (e.g. degree 0 under the default spec).
  std::optional<std::size_t> BinOf(std::int64_t degree) const {
    if (degree < lower_bounds.front()) return std::nullopt;
    std::size_t bin = 0;
    while (bin + 1 < lower_bounds.size() && degree >= lower_bounds[bin + 1]) {
      ++bin;
    }
    return bin;
  }

  // Human-readable bin labels: "1", "2", "3+" for the default spec.
  std::vector<std::string> Labels() const {
    std::vector<std::string> labels;
    labels.reserve(lower_bounds.size());
    for (std::size_t i = 0; i < lower_bounds.size(); ++i) {
      const std::int64_t lo = lower_bounds[i];
      if (i + 1 == lower_bounds.size()) {
        labels.push_back(std::to_string(lo) + "+");
      } else if (lower_bounds[i + 1] == lo + 1) {
        labels.push_back(std::to_string(lo));
      } else {
        labels.push_back(std::to_string(lo) + "-" +
                         std::to_string(lower_bounds[i + 1] - 1));
      }
    }
    return labels;
  }
};

struct DegreeVector {
  int interval = 1;
  std::map<UserId, std::int64_t> degrees;
};

struct DegreeHistogram {
  int interval = 1;
  std::vector<std::int64_t> counts;  // One per bin of `binning`.
  BinSpec binning;
};

// Out-degree of every observed user: the number of distinct users it sent
// requests to during the interval. Users that only received requests get
// degree 0.
inline DegreeVector ComputeDegreeVector(const IntervalGraph& g) {
  DegreeVector dv;
  dv.interval = g.index;
  for (const UserId& u : g.users) dv.degrees.emplace(u, 0);
  for (const auto& [source, destination] : g.edges) {
    ++dv.degrees[source];
  }
  return dv;
}

// Total degree of the interval, which equals the interval's edge count.
// Adding or removing one edge moves this by exactly 1.
inline std::int64_t DegreeSum(const IntervalGraph& g) {
  return static_cast<std::int64_t>(g.edges.size());
}

// Counts users per degree bin. A user appears in at most one bin, so
// dropping a user from the graph moves the count of the bin holding its
// own degree by one.
inline DegreeHistogram ComputeDegreeHistogram(const IntervalGraph& g,
                                              const BinSpec& spec) {
  spec.Validate();
  DegreeHistogram hist;
  hist.interval = g.index;
  hist.binning = spec;
  hist.counts.assign(spec.size(), 0);
  const DegreeVector dv = ComputeDegreeVector(g);
  for (const auto& [user, degree] : dv.degrees) {
    if (const auto bin = spec.BinOf(degree)) ++hist.counts[*bin];
  }
  return hist;
}

}  // namespace arpdp

#endif  // ARPDP_DEGREE_HPP_
