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

#ifndef ARPDP_INGEST_HPP_
#define ARPDP_INGEST_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "arpdp/error.hpp"
#include "arpdp/rng.hpp"

namespace arpdp {

using UserId = std::string;

// One observed ARP request, already reduced to a (when, who, whom) triple.
// Self-requests are legal input; they drop out when graphs are built since
// they carry no inter-user relationship.
struct ArpEvent {
  std::int64_t timestamp = 0;  // Seconds since epoch, >= 0.
  UserId source;
  UserId destination;
};

// Requests of one collection interval viewed as a directed simple graph:
// an edge (s, d) means s asked for d at least once during the interval.
struct IntervalGraph {
  int index = 1;  // 1-based interval ordinal.
  std::set<std::pair<UserId, UserId>> edges;
  std::set<UserId> users;  // Every endpoint of every edge.
};

struct CaptureConfig {
  std::int64_t interval_length = 7 * 24 * 3600;  // Default: one week.
  int t = 1;  // Number of intervals in the released window.
  bool pseudonymize = false;
  std::string pseudonym_key = "arpdp";

  void Validate() const {
    if (interval_length <= 0) {
      throw ValidationError("interval_length must be > 0");
    }
    if (t < 1) throw ValidationError("t must be >= 1");
  }
};

enum class MalformedLinePolicy { kAbort, kSkipAndWarn };

struct ParseResult {
  std::vector<ArpEvent> events;
  std::vector<std::string> warnings;
};

// Stable keyed pseudonym for an identifier string (FNV-1a over key and raw
// id). Keeps raw MAC/IP strings out of the rest of the pipeline; it is
// hygiene, not a privacy guarantee — the DP mechanisms do not rely on it.
inline UserId Pseudonymize(const std::string& raw, const std::string& key) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto absorb = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  absorb(key);
  h ^= 0x1f;
  h *= 0x100000001b3ULL;
  absorb(raw);
  char buf[20];
  std::snprintf(buf, sizeof(buf), "p%016llx",
                static_cast<unsigned long long>(h));
  return UserId(buf);
}

namespace detail {

inline void StripCr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

inline bool SplitTriple(const std::string& line, std::string out[3]) {
  std::size_t start = 0;
  for (int field = 0; field < 3; ++field) {
    const std::size_t comma = line.find(',', start);
    if (field < 2) {
      if (comma == std::string::npos) return false;
      out[field] = line.substr(start, comma - start);
      start = comma + 1;
    } else {
      if (comma != std::string::npos) return false;  // Extra fields.
      out[field] = line.substr(start);
    }
  }
  return !out[0].empty() && !out[1].empty() && !out[2].empty();
}

inline bool ParseTimestamp(const std::string& field, std::int64_t& out) {
  const char* first = field.data();
  const char* last = first + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && out >= 0;
}

}  // namespace detail

// Reads `timestamp,source,destination` lines (header optional, LF or CRLF).
// Malformed lines either abort with the offending line number or are
// collected as warnings, per policy.
inline ParseResult ParseEvents(std::istream& in, const CaptureConfig& cfg,
                               MalformedLinePolicy policy) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::StripCr(line);
    if (line.empty()) continue;
    std::string fields[3];
    std::int64_t ts = 0;
    const bool shaped = detail::SplitTriple(line, fields);
    if (shaped && detail::ParseTimestamp(fields[0], ts)) {
      ArpEvent event;
      event.timestamp = ts;
      event.source = cfg.pseudonymize
                         ? Pseudonymize(fields[1], cfg.pseudonym_key)
                         : fields[1];
      event.destination = cfg.pseudonymize
                              ? Pseudonymize(fields[2], cfg.pseudonym_key)
                              : fields[2];
      result.events.push_back(std::move(event));
      continue;
    }
    if (line_no == 1 && shaped && fields[0] == "timestamp") continue;
    const std::string message =
        "line " + std::to_string(line_no) + ": malformed event \"" + line +
        "\"";
    if (policy == MalformedLinePolicy::kAbort) throw ValidationError(message);
    result.warnings.push_back(message);
  }
  if (in.bad()) throw IoError("stream failure while reading events");
  return result;
}

struct BucketResult {
  std::vector<IntervalGraph> graphs;  // Always exactly cfg.t graphs.
  std::vector<std::string> warnings;
};

// Buckets events into t interval graphs. The event at time tau lands in
// interval tau / interval_length + 1; repeated (s, d) pairs collapse to one
// edge, self-requests contribute nothing, and events past the window are
// dropped with a warning. The result is invariant to the input order.
inline BucketResult BucketIntervals(const std::vector<ArpEvent>& events,
                                    const CaptureConfig& cfg) {
  cfg.Validate();
  BucketResult result;
  result.graphs.resize(static_cast<std::size_t>(cfg.t));
  for (int j = 0; j < cfg.t; ++j) {
    result.graphs[static_cast<std::size_t>(j)].index = j + 1;
  }
  std::size_t beyond_window = 0;
  for (const ArpEvent& event : events) {
    const std::int64_t interval = event.timestamp / cfg.interval_length + 1;
    if (interval > cfg.t) {
      ++beyond_window;
      continue;
    }
    if (event.source == event.destination) continue;
    IntervalGraph& g = result.graphs[static_cast<std::size_t>(interval - 1)];
    g.edges.emplace(event.source, event.destination);
    g.users.insert(event.source);
    g.users.insert(event.destination);
  }
  if (beyond_window > 0) {
    result.warnings.push_back(std::to_string(beyond_window) +
                              " event(s) beyond interval " +
                              std::to_string(cfg.t) + " dropped");
  }
  return result;
}

// One injected anomaly: at `interval`, a designated user's out-degree is
// inflated by `magnitude` extra distinct destinations (the resulting degree
// caps at n-1). Entry k of the anomaly list designates user k mod n, so
// several entries on the same interval spike several users.
struct AnomalySpec {
  int interval = 1;  // 1-based.
  int magnitude = 0;
};

// Synthetic LAN scenario standing in for captured datasets. Per interval,
// each user requests a random subset of the other users with expected size
// base_rate.
struct SynthSpec {
  std::size_t user_count = 2;  // n >= 2.
  int t = 1;
  double base_rate = 1.0;  // Expected out-degree per user per interval.
  std::vector<AnomalySpec> anomalies;
  std::uint64_t seed = 0;

  void Validate() const {
    if (user_count < 2) throw ValidationError("synth user_count must be >= 2");
    if (t < 1) throw ValidationError("synth t must be >= 1");
    if (!(base_rate >= 0.0)) throw ValidationError("base_rate must be >= 0");
    for (const AnomalySpec& a : anomalies) {
      if (a.interval < 1 || a.interval > t) {
        throw ValidationError("anomaly interval " + std::to_string(a.interval) +
                              " outside [1, " + std::to_string(t) + "]");
      }
      if (a.magnitude < 0) throw ValidationError("anomaly magnitude < 0");
    }
  }
};

namespace detail {

inline UserId SynthUserId(std::size_t index, std::size_t user_count) {
  std::size_t width = 1;
  for (std::size_t max = user_count - 1; max >= 10; max /= 10) ++width;
  std::string digits = std::to_string(index);
  return "u" + std::string(width - digits.size(), '0') + digits;
}

// Stream-id offset for scenario generation. Keeps the synth draws disjoint
// from the mechanisms' per-interval noise streams when a run reuses one
// seed for both, so the noise never correlates with the data it hides.
constexpr std::uint64_t kSynthStreamBase = 0x53594e5448ULL;

}  // namespace detail

// Deterministic scenario generation: interval j draws from stream (seed, j),
// users are visited in ascending order and anomalies in list order, so equal
// specs serialize byte-identically. Subset selection walks candidates with
// geometric skips, which keeps dense LANs with sparse traffic cheap.
inline std::vector<IntervalGraph> SynthScenario(const SynthSpec& spec) {
  spec.Validate();
  const std::size_t n = spec.user_count;
  const double p = std::min(1.0, spec.base_rate / static_cast<double>(n - 1));

  std::vector<UserId> ids(n);
  for (std::size_t u = 0; u < n; ++u) ids[u] = detail::SynthUserId(u, n);

  std::vector<IntervalGraph> graphs(static_cast<std::size_t>(spec.t));
  // destinations[u] holds candidate indices (u itself excluded by mapping).
  std::vector<std::vector<std::uint32_t>> chosen(n);
  for (int j = 1; j <= spec.t; ++j) {
    SeededRng rng = SeededRng::Stream(
        spec.seed, detail::kSynthStreamBase + static_cast<std::uint64_t>(j));
    for (auto& c : chosen) c.clear();

    if (p >= 1.0) {
      for (std::size_t u = 0; u < n; ++u) {
        chosen[u].resize(n - 1);
        for (std::size_t c = 0; c + 1 < n; ++c) {
          chosen[u][c] = static_cast<std::uint32_t>(c);
        }
      }
    } else if (p > 0.0) {
      const double log1mp = std::log1p(-p);
      for (std::size_t u = 0; u < n; ++u) {
        std::size_t pos = 0;
        while (true) {
          const double skip = std::floor(std::log(rng.UnitOpen()) / log1mp);
          if (skip >= static_cast<double>(n)) break;
          pos += static_cast<std::size_t>(skip);
          if (pos >= n - 1) break;
          chosen[u].push_back(static_cast<std::uint32_t>(pos));
          ++pos;
        }
      }
    }

    std::size_t entry = 0;
    for (const AnomalySpec& anomaly : spec.anomalies) {
      const std::size_t designated = entry++ % n;
      if (anomaly.interval != j) continue;
      std::vector<std::uint32_t>& have = chosen[designated];
      const std::size_t target =
          std::min(have.size() + static_cast<std::size_t>(anomaly.magnitude),
                   n - 1);
      if (target <= have.size()) continue;
      std::vector<std::uint32_t> pool;
      pool.reserve(n - 1 - have.size());
      std::set<std::uint32_t> taken(have.begin(), have.end());
      for (std::size_t c = 0; c + 1 < n; ++c) {
        const auto cand = static_cast<std::uint32_t>(c);
        if (!taken.count(cand)) pool.push_back(cand);
      }
      // Partial Fisher-Yates: pick exactly the missing count.
      const std::size_t need = target - have.size();
      for (std::size_t i = 0; i < need; ++i) {
        const std::size_t pick =
            i + static_cast<std::size_t>(rng.Below(pool.size() - i));
        std::swap(pool[i], pool[pick]);
        have.push_back(pool[i]);
      }
    }

    IntervalGraph& g = graphs[static_cast<std::size_t>(j - 1)];
    g.index = j;
    for (std::size_t u = 0; u < n; ++u) {
      for (std::uint32_t c : chosen[u]) {
        const std::size_t dest = c < u ? c : static_cast<std::size_t>(c) + 1;
        g.edges.emplace(ids[u], ids[dest]);
        g.users.insert(ids[u]);
        g.users.insert(ids[dest]);
      }
    }
  }
  return graphs;
}

}  // namespace arpdp

#endif  // ARPDP_INGEST_HPP_
