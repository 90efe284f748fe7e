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

#ifndef ARPDP_PIPELINE_HPP_
#define ARPDP_PIPELINE_HPP_

#include <fcntl.h>
#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "arpdp/detect.hpp"
#include "arpdp/error.hpp"
#include "arpdp/evaluate.hpp"
#include "arpdp/ingest.hpp"
#include "arpdp/io.hpp"
#include "arpdp/mechanisms.hpp"

namespace arpdp {

// One CLI invocation, fully resolved. Field names mirror the flag names;
// the same keys work in a `key = value` config file or a JSON one (the
// params.json written next to every artifact is itself a valid config, so
// any run can be repeated from its echo).
struct PipelineConfig {
  std::string subcommand;  // release | detect | evaluate | sweep | synth

  // Input: a CSV of events, or a synthetic scenario (n + base-rate).
  std::optional<std::string> input;
  std::optional<std::size_t> n;  // Synth LAN size, and #p override on CSVs.
  double base_rate = 1.0;
  std::vector<AnomalySpec> anomalies;

  std::optional<Mechanism> mechanism;
  double epsilon = 1.0;
  std::optional<double> delta_prime;
  int t = 1;
  std::int64_t interval_length = 7 * 24 * 3600;
  BinSpec bins;
  DetectorParams detector;
  std::uint64_t seed = 0;
  std::size_t seeds = 1;  // Repetitions for evaluate/sweep.
  std::string out = ".";

  // Grids for sweep.
  std::vector<Mechanism> mechanisms;
  std::vector<double> epsilons;
  std::vector<double> delta_primes;

  bool pseudonymize = false;
  std::string pseudonym_key = "arpdp";
  bool skip_malformed = false;
  bool allow_infeasible = false;
  bool new_budget_acknowledged = false;
  bool plot_data = false;
};

namespace pipeline_detail {

inline std::vector<std::string> SplitList(const std::string& csv) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t comma = csv.find(',', start);
    if (comma == std::string::npos) comma = csv.size();
    std::string item = csv.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.erase(item.begin());
    while (!item.empty() && item.back() == ' ') item.pop_back();
    if (!item.empty()) items.push_back(item);
    start = comma + 1;
  }
  return items;
}

inline double ParseDouble(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used == value.size()) return parsed;
  } catch (const std::exception&) {
  }
  throw ValidationError(key + ": expected a number, got \"" + value + "\"");
}

inline std::int64_t ParseInt(const std::string& key,
                             const std::string& value) {
  try {
    std::size_t used = 0;
    const std::int64_t parsed = std::stoll(value, &used);
    if (used == value.size()) return parsed;
  } catch (const std::exception&) {
  }
  throw ValidationError(key + ": expected an integer, got \"" + value + "\"");
}

inline bool ParseBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ValidationError(key + ": expected a boolean, got \"" + value + "\"");
}

// Anomaly grammar: `interval:magnitude` entries separated by commas, with
// an optional `*count` repeat suffix. Repeats designate distinct users, so
// "12:90*45" spikes 45 users by 90 at interval 12.
inline std::vector<AnomalySpec> ParseAnomalies(const std::string& value) {
  std::vector<AnomalySpec> anomalies;
  for (const std::string& item : SplitList(value)) {
    const std::size_t colon = item.find(':');
    if (colon == std::string::npos) {
      throw ValidationError("anomalies: expected interval:magnitude, got \"" +
                            item + "\"");
    }
    std::size_t repeat = 1;
    std::string magnitude_part = item.substr(colon + 1);
    const std::size_t star = magnitude_part.find('*');
    if (star != std::string::npos) {
      repeat = static_cast<std::size_t>(
          ParseInt("anomalies", magnitude_part.substr(star + 1)));
      magnitude_part = magnitude_part.substr(0, star);
    }
    AnomalySpec spec;
    spec.interval =
        static_cast<int>(ParseInt("anomalies", item.substr(0, colon)));
    spec.magnitude = static_cast<int>(ParseInt("anomalies", magnitude_part));
    for (std::size_t i = 0; i < repeat; ++i) anomalies.push_back(spec);
  }
  return anomalies;
}

inline std::string AnomaliesToString(const std::vector<AnomalySpec>& specs) {
  std::string out;
  std::size_t i = 0;
  while (i < specs.size()) {
    std::size_t j = i;
    while (j < specs.size() && specs[j].interval == specs[i].interval &&
           specs[j].magnitude == specs[i].magnitude) {
      ++j;
    }
    if (!out.empty()) out += ",";
    out += std::to_string(specs[i].interval) + ":" +
           std::to_string(specs[i].magnitude);
    if (j - i > 1) out += "*" + std::to_string(j - i);
    i = j;
  }
  return out;
}

inline BinSpec ParseBins(const std::string& value) {
  BinSpec spec;
  spec.lower_bounds.clear();
  for (const std::string& item : SplitList(value)) {
    spec.lower_bounds.push_back(ParseInt("bins", item));
  }
  spec.Validate();
  return spec;
}

inline std::string BinsToString(const BinSpec& spec) {
  std::string out;
  for (std::int64_t b : spec.lower_bounds) {
    if (!out.empty()) out += ",";
    out += std::to_string(b);
  }
  return out;
}

}  // namespace pipeline_detail

// Applies one `key = value` setting. Unknown keys are rejected so typos
// fail loudly; the derived block of a params echo is skipped upstream.
inline void ApplyConfigValue(PipelineConfig& cfg, const std::string& key,
                             const std::string& value) {
  using pipeline_detail::ParseBool;
  using pipeline_detail::ParseDouble;
  using pipeline_detail::ParseInt;
  if (key == "subcommand") {
    cfg.subcommand = value;
  } else if (key == "input") {
    cfg.input = value;
  } else if (key == "n") {
    cfg.n = static_cast<std::size_t>(ParseInt(key, value));
  } else if (key == "base-rate") {
    cfg.base_rate = ParseDouble(key, value);
  } else if (key == "anomalies") {
    cfg.anomalies = pipeline_detail::ParseAnomalies(value);
  } else if (key == "mechanism") {
    cfg.mechanism = MechanismFromString(value);
  } else if (key == "epsilon") {
    cfg.epsilon = ParseDouble(key, value);
  } else if (key == "delta-prime") {
    cfg.delta_prime = ParseDouble(key, value);
  } else if (key == "t") {
    cfg.t = static_cast<int>(ParseInt(key, value));
  } else if (key == "interval-length") {
    cfg.interval_length = ParseInt(key, value);
  } else if (key == "bins") {
    cfg.bins = pipeline_detail::ParseBins(value);
  } else if (key == "lambda") {
    cfg.detector.lambda = ParseDouble(key, value);
  } else if (key == "k") {
    cfg.detector.k = ParseDouble(key, value);
  } else if (key == "warmup") {
    cfg.detector.warmup = static_cast<int>(ParseInt(key, value));
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(ParseInt(key, value));
  } else if (key == "seeds") {
    cfg.seeds = static_cast<std::size_t>(ParseInt(key, value));
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "mechanisms") {
    cfg.mechanisms.clear();
    for (const std::string& m : pipeline_detail::SplitList(value)) {
      cfg.mechanisms.push_back(MechanismFromString(m));
    }
  } else if (key == "epsilons") {
    cfg.epsilons.clear();
    for (const std::string& e : pipeline_detail::SplitList(value)) {
      cfg.epsilons.push_back(ParseDouble(key, e));
    }
  } else if (key == "delta-primes") {
    cfg.delta_primes.clear();
    for (const std::string& d : pipeline_detail::SplitList(value)) {
      cfg.delta_primes.push_back(ParseDouble(key, d));
    }
  } else if (key == "pseudonymize") {
    cfg.pseudonymize = ParseBool(key, value);
  } else if (key == "pseudonym-key") {
    cfg.pseudonym_key = value;
  } else if (key == "skip-malformed") {
    cfg.skip_malformed = ParseBool(key, value);
  } else if (key == "allow-infeasible") {
    cfg.allow_infeasible = ParseBool(key, value);
  } else if (key == "new-budget-acknowledged") {
    cfg.new_budget_acknowledged = ParseBool(key, value);
  } else if (key == "plot-data") {
    cfg.plot_data = ParseBool(key, value);
  } else {
    throw ValidationError("unknown config key: \"" + key + "\"");
  }
}

// Loads a config document: JSON when it starts with '{' (the params.json
// echo format), otherwise flat `key = value` lines with '#' comments.
inline void LoadConfigText(PipelineConfig& cfg, const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("config JSON: ") + e.what());
    }
    for (const auto& [key, value] : doc.items()) {
      if (key == "derived" || key == "warnings") continue;
      std::string str;
      if (value.is_string()) {
        str = value.get<std::string>();
      } else if (value.is_boolean()) {
        str = value.get<bool>() ? "true" : "false";
      } else if (value.is_number_integer()) {
        str = std::to_string(value.get<std::int64_t>());
      } else if (value.is_number_unsigned()) {
        str = std::to_string(value.get<std::uint64_t>());
      } else if (value.is_number_float()) {
        str = FormatDouble(value.get<double>());
      } else {
        throw ValidationError("config JSON: unsupported value for \"" + key +
                              "\"");
      }
      ApplyConfigValue(cfg, key, str);
    }
    return;
  }
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t") != std::string::npos) {
        throw ValidationError("config line " + std::to_string(line_no) +
                              ": expected key = value");
      }
      continue;
    }
    auto trim = [](std::string s) {
      const std::size_t begin = s.find_first_not_of(" \t");
      const std::size_t end = s.find_last_not_of(" \t");
      return begin == std::string::npos ? std::string()
                                        : s.substr(begin, end - begin + 1);
    };
    ApplyConfigValue(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

inline void LoadConfigFile(PipelineConfig& cfg, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  LoadConfigText(cfg, buf.str());
}

// The flat echo of a config; omits `out` so the same run written elsewhere
// yields byte-identical artifacts.
inline nlohmann::ordered_json ConfigToJson(const PipelineConfig& cfg) {
  nlohmann::ordered_json j;
  j["subcommand"] = cfg.subcommand;
  if (cfg.input) j["input"] = *cfg.input;
  if (cfg.n) j["n"] = *cfg.n;
  if (!cfg.input) {
    j["base-rate"] = cfg.base_rate;
    if (!cfg.anomalies.empty()) {
      j["anomalies"] = pipeline_detail::AnomaliesToString(cfg.anomalies);
    }
  }
  if (cfg.mechanism) j["mechanism"] = ToString(*cfg.mechanism);
  j["epsilon"] = cfg.epsilon;
  if (cfg.delta_prime) j["delta-prime"] = *cfg.delta_prime;
  j["t"] = cfg.t;
  j["interval-length"] = cfg.interval_length;
  j["bins"] = pipeline_detail::BinsToString(cfg.bins);
  j["lambda"] = cfg.detector.lambda;
  j["k"] = cfg.detector.k;
  j["warmup"] = cfg.detector.warmup;
  j["seed"] = cfg.seed;
  j["seeds"] = cfg.seeds;
  if (!cfg.mechanisms.empty()) {
    std::string ms;
    for (Mechanism m : cfg.mechanisms) {
      if (!ms.empty()) ms += ",";
      ms += ToString(m);
    }
    j["mechanisms"] = ms;
  }
  if (!cfg.epsilons.empty()) {
    std::string es;
    for (double e : cfg.epsilons) {
      if (!es.empty()) es += ",";
      es += FormatDouble(e);
    }
    j["epsilons"] = es;
  }
  if (!cfg.delta_primes.empty()) {
    std::string ds;
    for (double d : cfg.delta_primes) {
      if (!ds.empty()) ds += ",";
      ds += FormatDouble(d);
    }
    j["delta-primes"] = ds;
  }
  if (cfg.pseudonymize) {
    j["pseudonymize"] = true;
    j["pseudonym-key"] = cfg.pseudonym_key;
  }
  if (cfg.skip_malformed) j["skip-malformed"] = true;
  if (cfg.allow_infeasible) j["allow-infeasible"] = true;
  if (cfg.plot_data) j["plot-data"] = true;
  return j;
}

namespace pipeline_detail {

// Exclusive lock on an output directory for the duration of a run, so two
// invocations cannot interleave partial artifacts.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir)
      : path_(dir / ".arpdp.lock") {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir.string());
    const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
      if (errno == EEXIST) {
        throw ValidationError("output directory is locked by another run: " +
                              path_.string());
      }
      throw IoError("cannot create lock file: " + path_.string());
    }
    ::close(fd);
  }
  ~DirectoryLock() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  std::filesystem::path path_;
};

// Stages artifacts as .tmp files and renames them all at Commit. If the run
// throws first, the destructor removes the stages and no partial output
// remains.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(const std::filesystem::path& dir) : dir_(dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory: " + dir_.string());
  }

  ~ArtifactWriter() {
    for (const auto& staged : staged_) {
      std::error_code ec;
      std::filesystem::remove(staged, ec);
    }
  }

  void Stage(const std::string& name, const std::string& content) {
    const std::filesystem::path tmp = dir_ / (name + ".tmp");
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out || !(out << content) || !out.flush()) {
      throw IoError("cannot write " + tmp.string());
    }
    staged_.push_back(tmp);
    names_.push_back(name);
  }

  void Commit() {
    for (std::size_t i = 0; i < staged_.size(); ++i) {
      std::error_code ec;
      std::filesystem::rename(staged_[i], dir_ / names_[i], ec);
      if (ec) throw IoError("cannot finalize " + names_[i]);
    }
    staged_.clear();
    names_.clear();
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> staged_;
  std::vector<std::string> names_;
};

}  // namespace pipeline_detail

struct LoadedInput {
  std::vector<IntervalGraph> graphs;
  std::size_t user_count = 1;
  std::vector<std::string> warnings;
};

// Materializes the configured input: parse-and-bucket a CSV, or generate
// the synthetic scenario. The privacy unit count defaults to the number of
// distinct users seen in the window and can be pinned with `n`.
inline LoadedInput LoadInput(const PipelineConfig& cfg) {
  LoadedInput loaded;
  CaptureConfig capture;
  capture.interval_length = cfg.interval_length;
  capture.t = cfg.t;
  capture.pseudonymize = cfg.pseudonymize;
  capture.pseudonym_key = cfg.pseudonym_key;
  capture.Validate();
  if (cfg.input) {
    std::ifstream in(*cfg.input, std::ios::binary);
    if (!in) throw IoError("cannot open input: " + *cfg.input);
    ParseResult parsed =
        ParseEvents(in, capture,
                    cfg.skip_malformed ? MalformedLinePolicy::kSkipAndWarn
                                       : MalformedLinePolicy::kAbort);
    BucketResult bucketed = BucketIntervals(parsed.events, capture);
    loaded.graphs = std::move(bucketed.graphs);
    loaded.warnings = std::move(parsed.warnings);
    loaded.warnings.insert(loaded.warnings.end(), bucketed.warnings.begin(),
                           bucketed.warnings.end());
    if (cfg.n) {
      loaded.user_count = *cfg.n;
    } else {
      std::set<UserId> all_users;
      for (const IntervalGraph& g : loaded.graphs) {
        all_users.insert(g.users.begin(), g.users.end());
      }
      loaded.user_count = std::max<std::size_t>(1, all_users.size());
    }
  } else if (cfg.n) {
    SynthSpec spec;
    spec.user_count = *cfg.n;
    spec.t = cfg.t;
    spec.base_rate = cfg.base_rate;
    spec.anomalies = cfg.anomalies;
    spec.seed = cfg.seed;
    loaded.graphs = SynthScenario(spec);
    loaded.user_count = spec.user_count;
  } else {
    throw ValidationError("no input: provide an events CSV or a synth n");
  }
  return loaded;
}

struct RunResult {
  std::vector<std::string> artifacts;  // File names written under out/.
  std::vector<std::string> warnings;
};

// `synth`: generate a scenario and write it as an event CSV, one event per
// edge stamped at the start of its interval.
inline RunResult RunSynth(const PipelineConfig& cfg) {
  if (!cfg.n) throw ValidationError("synth requires n");
  if (cfg.input) throw ValidationError("synth does not take an input CSV");
  SynthSpec spec;
  spec.user_count = *cfg.n;
  spec.t = cfg.t;
  spec.base_rate = cfg.base_rate;
  spec.anomalies = cfg.anomalies;
  spec.seed = cfg.seed;
  spec.Validate();
  CaptureConfig capture;
  capture.interval_length = cfg.interval_length;
  capture.t = cfg.t;
  capture.Validate();

  const std::vector<IntervalGraph> graphs = SynthScenario(spec);
  std::vector<ArpEvent> events;
  for (const IntervalGraph& g : graphs) {
    const std::int64_t stamp =
        static_cast<std::int64_t>(g.index - 1) * cfg.interval_length;
    for (const auto& [source, destination] : g.edges) {
      events.push_back(ArpEvent{stamp, source, destination});
    }
  }

  pipeline_detail::DirectoryLock lock{std::filesystem::path(cfg.out)};
  pipeline_detail::ArtifactWriter writer{std::filesystem::path(cfg.out)};
  writer.Stage("events.csv", EventsCsv(events));
  writer.Stage("params.json", ConfigToJson(cfg).dump(2) + "\n");
  writer.Commit();
  return RunResult{{"events.csv", "params.json"}, {}};
}

// `release`: privatize the input window with the configured mechanism and
// write the released series plus its parameter echo. Refuses to overwrite
// an existing release unless the caller acknowledges that re-releasing the
// same window spends a fresh privacy budget.
inline RunResult RunRelease(const PipelineConfig& cfg) {
  if (!cfg.mechanism) throw ValidationError("release requires a mechanism");
  LoadedInput loaded = LoadInput(cfg);

  ReleaseRequest req;
  req.graphs = std::move(loaded.graphs);
  req.params.epsilon = cfg.epsilon;
  req.params.delta_prime = cfg.delta_prime;
  req.params.t = cfg.t;
  req.params.notion = NotionFor(*cfg.mechanism);
  req.params.user_count = loaded.user_count;
  req.mechanism = *cfg.mechanism;
  req.bin_spec = cfg.bins;
  req.seed = cfg.seed;
  req.allow_infeasible = cfg.allow_infeasible;

  const std::filesystem::path dir(cfg.out);
  if (std::filesystem::exists(dir / "released.csv") &&
      !cfg.new_budget_acknowledged) {
    throw ValidationError(
        "released.csv already exists; a second release of the same window "
        "composes privacy budgets. Pass --new-budget-acknowledged to "
        "proceed.");
  }

  const ReleasedSeries series = Release(req);
  nlohmann::ordered_json params = ConfigToJson(cfg);
  params["n"] = loaded.user_count;
  params["derived"] = EchoToJson(series.params_echo);

  pipeline_detail::DirectoryLock lock{dir};
  pipeline_detail::ArtifactWriter writer{dir};
  writer.Stage("released.csv", ReleasedSeriesCsv(series));
  writer.Stage("params.json", params.dump(2) + "\n");
  writer.Commit();
  return RunResult{{"released.csv", "params.json"}, loaded.warnings};
}

// `detect`: run the detector over a series CSV (a release or any series in
// the same shape). Histogram series go through the L1 transform first, so
// their labels index the t-1 consecutive-pair gaps.
inline RunResult RunDetect(const PipelineConfig& cfg) {
  if (!cfg.input) throw ValidationError("detect requires an input series");
  std::ifstream in(*cfg.input, std::ios::binary);
  if (!in) throw IoError("cannot open input: " + *cfg.input);
  const SeriesData series = ReadSeriesCsv(in);

  std::vector<double> values;
  if (series.kind == ReleasedSeries::Kind::kScalar) {
    values.assign(series.scalar.begin(), series.scalar.end());
  } else {
    values = L1Series(series.histogram);
  }
  const AnomalyLabels labels = EwmaDetect(values, cfg.detector);

  pipeline_detail::DirectoryLock lock{std::filesystem::path(cfg.out)};
  pipeline_detail::ArtifactWriter writer{std::filesystem::path(cfg.out)};
  writer.Stage("labels.csv", LabelsCsv(labels));
  writer.Stage("params.json", ConfigToJson(cfg).dump(2) + "\n");
  writer.Commit();
  return RunResult{{"labels.csv", "params.json"}, {}};
}

namespace pipeline_detail {

inline std::vector<std::uint64_t> RepetitionSeeds(std::uint64_t base,
                                                  std::size_t count) {
  std::vector<std::uint64_t> seeds;
  seeds.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    seeds.push_back(MixSeeds(base, i));
  }
  return seeds;
}

}  // namespace pipeline_detail

// `evaluate`: one mechanism cell, aggregated over `seeds` repetitions whose
// mechanism seeds derive from the base seed.
inline RunResult RunEvaluate(const PipelineConfig& cfg) {
  if (!cfg.mechanism) throw ValidationError("evaluate requires a mechanism");
  if (cfg.seeds < 1) throw ValidationError("seeds must be >= 1");
  LoadedInput loaded = LoadInput(cfg);
  const std::vector<UtilityReport> reports = SweepGraphs(
      loaded.graphs, loaded.user_count, {*cfg.mechanism}, {cfg.epsilon},
      cfg.delta_prime ? std::vector<double>{*cfg.delta_prime}
                      : std::vector<double>{0.01},
      pipeline_detail::RepetitionSeeds(cfg.seed, cfg.seeds), cfg.detector,
      cfg.bins);

  pipeline_detail::DirectoryLock lock{std::filesystem::path(cfg.out)};
  pipeline_detail::ArtifactWriter writer{std::filesystem::path(cfg.out)};
  writer.Stage("report.csv", ReportsCsv(reports));
  writer.Stage("report.json", ReportsToJson(reports).dump(2) + "\n");
  writer.Stage("params.json", ConfigToJson(cfg).dump(2) + "\n");
  RunResult result{{"report.csv", "report.json", "params.json"},
                   loaded.warnings};
  if (cfg.plot_data) {
    writer.Stage("plot.csv", PlotDataCsv(reports));
    result.artifacts.push_back("plot.csv");
  }
  writer.Commit();
  return result;
}

// `sweep`: full grid of mechanisms x epsilons (x delta-primes for the
// delta mechanisms), each cell aggregated over the repetition seeds.
inline RunResult RunSweep(const PipelineConfig& cfg) {
  if (cfg.mechanisms.empty()) {
    throw ValidationError("sweep requires mechanisms");
  }
  if (cfg.epsilons.empty()) throw ValidationError("sweep requires epsilons");
  if (cfg.seeds < 1) throw ValidationError("seeds must be >= 1");
  LoadedInput loaded = LoadInput(cfg);
  const std::vector<UtilityReport> reports = SweepGraphs(
      loaded.graphs, loaded.user_count, cfg.mechanisms, cfg.epsilons,
      cfg.delta_primes.empty() ? std::vector<double>{0.01} : cfg.delta_primes,
      pipeline_detail::RepetitionSeeds(cfg.seed, cfg.seeds), cfg.detector,
      cfg.bins);

  pipeline_detail::DirectoryLock lock{std::filesystem::path(cfg.out)};
  pipeline_detail::ArtifactWriter writer{std::filesystem::path(cfg.out)};
  writer.Stage("report.csv", ReportsCsv(reports));
  writer.Stage("report.json", ReportsToJson(reports).dump(2) + "\n");
  writer.Stage("params.json", ConfigToJson(cfg).dump(2) + "\n");
  RunResult result{{"report.csv", "report.json", "params.json"},
                   loaded.warnings};
  if (cfg.plot_data) {
    writer.Stage("plot.csv", PlotDataCsv(reports));
    result.artifacts.push_back("plot.csv");
  }
  writer.Commit();
  return result;
}

inline RunResult RunPipeline(const PipelineConfig& cfg) {
  if (cfg.subcommand == "synth") return RunSynth(cfg);
  if (cfg.subcommand == "release") return RunRelease(cfg);
  if (cfg.subcommand == "detect") return RunDetect(cfg);
  if (cfg.subcommand == "evaluate") return RunEvaluate(cfg);
  if (cfg.subcommand == "sweep") return RunSweep(cfg);
  throw ValidationError("unknown subcommand: \"" + cfg.subcommand + "\"");
}

}  // namespace arpdp

#endif  // ARPDP_PIPELINE_HPP_
