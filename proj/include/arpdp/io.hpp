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

#ifndef ARPDP_IO_HPP_
#define ARPDP_IO_HPP_

#include <cstdint>
#include <cstdio>
#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "arpdp/detect.hpp"
#include "arpdp/error.hpp"
#include "arpdp/evaluate.hpp"
#include "arpdp/mechanisms.hpp"

namespace arpdp {

// Shortest representation that round-trips a double exactly, so artifacts
// rewritten from their own echo compare byte-for-byte.
inline std::string FormatDouble(double x) {
  char buf[64];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == x) break;
  }
  return buf;
}

// Scalar series: `interval,value` rows, intervals 1..t.
inline std::string ScalarSeriesCsv(const std::vector<std::int64_t>& values) {
  std::string out = "interval,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += std::to_string(i + 1) + "," + std::to_string(values[i]) + "\n";
  }
  return out;
}

// Histogram series: `interval,bin_1,...,bin_k` rows.
inline std::string HistogramSeriesCsv(
    const std::vector<std::vector<std::int64_t>>& rows) {
  std::string out = "interval";
  const std::size_t arity = rows.empty() ? 0 : rows.front().size();
  for (std::size_t b = 1; b <= arity; ++b) {
    out += ",bin_" + std::to_string(b);
  }
  out += "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += std::to_string(i + 1);
    for (std::int64_t v : rows[i]) out += "," + std::to_string(v);
    out += "\n";
  }
  return out;
}

inline std::string ReleasedSeriesCsv(const ReleasedSeries& series) {
  return series.kind == ReleasedSeries::Kind::kScalar
             ? ScalarSeriesCsv(series.scalar)
             : HistogramSeriesCsv(series.histogram);
}

inline std::string LabelsCsv(const AnomalyLabels& labels) {
  std::string out = "interval,score,flag\n";
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    out += std::to_string(i + 1) + "," + FormatDouble(labels.scores[i]) + "," +
           (labels.labels[i] ? "1" : "0") + "\n";
  }
  return out;
}

inline std::string EventsCsv(const std::vector<ArpEvent>& events) {
  std::string out = "timestamp,source,destination\n";
  for (const ArpEvent& e : events) {
    out += std::to_string(e.timestamp) + "," + e.source + "," +
           e.destination + "\n";
  }
  return out;
}

// Debug dump of exact (pre-noise) histograms, one row per bin.
inline std::string DegreeHistogramsCsv(
    const std::vector<DegreeHistogram>& hists) {
  std::string out = "interval,bin_label,count\n";
  for (const DegreeHistogram& h : hists) {
    const std::vector<std::string> labels = h.binning.Labels();
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      out += std::to_string(h.interval) + "," + labels[b] + "," +
             std::to_string(h.counts[b]) + "\n";
    }
  }
  return out;
}

// Parsed form of a released-series CSV; kind is inferred from the header.
struct SeriesData {
  ReleasedSeries::Kind kind = ReleasedSeries::Kind::kScalar;
  std::vector<std::int64_t> scalar;
  std::vector<std::vector<std::int64_t>> histogram;
};

inline SeriesData ReadSeriesCsv(std::istream& in) {
  SeriesData data;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("series CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::size_t columns = 1;
  for (char c : line) columns += c == ',';
  if (line.rfind("interval,", 0) != 0 || columns < 2) {
    throw ValidationError("series CSV must start with an interval header");
  }
  data.kind = columns == 2 && line == "interval,value"
                  ? ReleasedSeries::Kind::kScalar
                  : ReleasedSeries::Kind::kHistogram;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::int64_t> fields;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) comma = line.size();
      try {
        fields.push_back(std::stoll(line.substr(start, comma - start)));
      } catch (const std::exception&) {
        throw ValidationError("series CSV line " + std::to_string(line_no) +
                              ": non-integer field");
      }
      start = comma + 1;
    }
    if (fields.size() != columns) {
      throw ValidationError("series CSV line " + std::to_string(line_no) +
                            ": expected " + std::to_string(columns) +
                            " fields");
    }
    if (data.kind == ReleasedSeries::Kind::kScalar) {
      data.scalar.push_back(fields[1]);
    } else {
      data.histogram.emplace_back(fields.begin() + 1, fields.end());
    }
  }
  if (in.bad()) throw IoError("stream failure while reading series CSV");
  return data;
}

inline nlohmann::ordered_json EchoToJson(const ParamsEcho& echo) {
  nlohmann::ordered_json j;
  j["mechanism"] = echo.mechanism;
  j["notion"] = echo.notion;
  j["epsilon"] = echo.epsilon;
  if (echo.delta_prime) j["delta_prime"] = *echo.delta_prime;
  if (echo.delta) j["delta"] = *echo.delta;
  if (echo.rho) j["rho"] = *echo.rho;
  j["per_interval_scale"] = echo.per_interval_scale;
  j["t"] = echo.t;
  j["n"] = echo.user_count;
  j["seed"] = echo.seed;
  if (!echo.bin_labels.empty()) j["bins"] = echo.bin_labels;
  return j;
}

inline std::string ReportsCsv(const std::vector<UtilityReport>& reports) {
  std::string out =
      "mechanism,epsilon,delta_prime,seeds,rmse_mean,rmse_std,"
      "tp,fp,tn,fn,tpr_mean,f1_mean,error\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? FormatDouble(*v) : std::string("n/a");
  };
  for (const UtilityReport& r : reports) {
    out += r.mechanism + "," + FormatDouble(r.epsilon) + "," +
           opt(r.delta_prime) + "," + std::to_string(r.seeds) + ",";
    if (r.error) {
      out += "n/a,n/a,0,0,0,0,n/a,n/a,\"" + *r.error + "\"\n";
      continue;
    }
    out += FormatDouble(r.rmse_mean) + "," + FormatDouble(r.rmse_std) + "," +
           std::to_string(r.confusion.tp) + "," +
           std::to_string(r.confusion.fp) + "," +
           std::to_string(r.confusion.tn) + "," +
           std::to_string(r.confusion.fn) + "," + opt(r.tpr_mean) + "," +
           opt(r.f1_mean) + ",\n";
  }
  return out;
}

inline nlohmann::ordered_json ReportsToJson(
    const std::vector<UtilityReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const UtilityReport& r : reports) {
    nlohmann::ordered_json j;
    j["mechanism"] = r.mechanism;
    j["epsilon"] = r.epsilon;
    if (r.delta_prime) j["delta_prime"] = *r.delta_prime;
    j["seeds"] = r.seeds;
    if (r.error) {
      j["error"] = *r.error;
    } else {
      j["rmse_mean"] = r.rmse_mean;
      j["rmse_std"] = r.rmse_std;
      j["tp"] = r.confusion.tp;
      j["fp"] = r.confusion.fp;
      j["tn"] = r.confusion.tn;
      j["fn"] = r.confusion.fn;
      j["tpr_mean"] = r.tpr_mean ? nlohmann::ordered_json(*r.tpr_mean)
                                 : nlohmann::ordered_json("n/a");
      j["f1_mean"] = r.f1_mean ? nlohmann::ordered_json(*r.f1_mean)
                               : nlohmann::ordered_json("n/a");
    }
    arr.push_back(j);
  }
  return arr;
}

// Tidy long-format rows for external plotting: one (cell, metric) per line.
inline std::string PlotDataCsv(const std::vector<UtilityReport>& reports) {
  std::string out = "mechanism,epsilon,delta_prime,metric,value\n";
  auto row = [&out](const UtilityReport& r, const std::string& metric,
                    double value) {
    out += r.mechanism + "," + FormatDouble(r.epsilon) + "," +
           (r.delta_prime ? FormatDouble(*r.delta_prime) : "n/a") + "," +
           metric + "," + FormatDouble(value) + "\n";
  };
  for (const UtilityReport& r : reports) {
    if (r.error) continue;
    row(r, "rmse_mean", r.rmse_mean);
    row(r, "rmse_std", r.rmse_std);
    if (r.tpr_mean) row(r, "tpr_mean", *r.tpr_mean);
    if (r.f1_mean) row(r, "f1_mean", *r.f1_mean);
  }
  return out;
}

}  // namespace arpdp

#endif  // ARPDP_IO_HPP_
