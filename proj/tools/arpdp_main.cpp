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
// Command-line front end: privatized release of LAN ARP-degree data and
// utility evaluation against an EWMA anomaly detector.
//
//   arpdp synth    --n 95 --t 30 --base-rate 0.24 --seed 7 --out data/
//   arpdp release  --input data/events.csv --mechanism naive --epsilon 5
//                  --t 30 --seed 7 --out run/
//   arpdp detect   --input run/released.csv --out run/
//   arpdp evaluate --n 95 --t 30 --base-rate 0.24 --mechanism naive
//                  --epsilon 5 --seeds 20 --out eval/
//   arpdp sweep    --n 95 --t 30 --base-rate 0.24
//                  --mechanisms naive,naive-delta --epsilons 1,2,4,8
//                  --seeds 20 --out sweep/
//
// Exit codes: 0 success, 2 validation failure, 3 I/O failure.

#include <exception>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arpdp/error.hpp"
#include "arpdp/pipeline.hpp"

namespace {

struct FlagCapture {
  // Flag values in the order given, keyed by config name. Collected as
  // strings and funneled through the same parser as config files, so flags
  // and files cannot drift apart.
  std::vector<std::pair<std::string, std::string>> overrides;
  std::string config_path;
};

void AddCommonOptions(CLI::App* cmd, FlagCapture* capture) {
  cmd->add_option("--config", capture->config_path,
                  "Config file (key = value lines, or a params.json echo); "
                  "flags override file values");
  auto opt = [cmd, capture](const std::string& flag, const std::string& key,
                            const std::string& help) {
    cmd->add_option_function<std::string>(
        flag,
        [capture, key](const std::string& v) {
          capture->overrides.emplace_back(key, v);
        },
        help);
  };
  auto boolean = [cmd, capture](const std::string& flag,
                                const std::string& key,
                                const std::string& help) {
    cmd->add_flag_callback(
        flag,
        [capture, key]() { capture->overrides.emplace_back(key, "true"); },
        help);
  };
  opt("--input", "input", "Event CSV (timestamp,source,destination)");
  opt("--mechanism", "mechanism",
      "naive | histogram | naive-delta | histogram-delta | "
      "naive-node-infeasible");
  opt("--epsilon", "epsilon", "Privacy budget");
  opt("--delta-prime", "delta-prime",
      "Per-unit failure budget for the delta mechanisms");
  opt("--t", "t", "Number of intervals in the window");
  opt("--interval-length", "interval-length", "Interval length in seconds");
  opt("--bins", "bins", "Histogram bin lower bounds, e.g. 1,2,3");
  opt("--lambda", "lambda", "Detector smoothing weight");
  opt("--k", "k", "Detector control-limit multiplier");
  opt("--warmup", "warmup", "Intervals before the detector may flag");
  opt("--seed", "seed", "Run seed");
  opt("--seeds", "seeds", "Repetitions for evaluate/sweep");
  opt("--n", "n", "Synthetic LAN size (also pins the privacy unit count)");
  opt("--base-rate", "base-rate", "Mean synthetic out-degree per user");
  opt("--anomalies", "anomalies",
      "Injected spikes, e.g. 12:90 or 12:90*45,22:90*45");
  opt("--mechanisms", "mechanisms", "Sweep mechanism list");
  opt("--epsilons", "epsilons", "Sweep epsilon list");
  opt("--delta-primes", "delta-primes", "Sweep delta-prime list");
  opt("--out", "out", "Output directory");
  opt("--pseudonym-key", "pseudonym-key", "Key for identifier hashing");
  boolean("--pseudonymize", "pseudonymize",
          "Hash identifiers at parse time");
  boolean("--skip-malformed", "skip-malformed",
          "Warn on malformed event lines instead of aborting");
  boolean("--allow-infeasible", "allow-infeasible",
          "Permit the naive-node-infeasible demonstration mechanism");
  boolean("--new-budget-acknowledged", "new-budget-acknowledged",
          "Overwrite an existing release, acknowledging the fresh budget");
  boolean("--plot-data", "plot-data", "Also write tidy plot.csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Differentially private release of LAN ARP-request degree data"};
  app.require_subcommand(1);

  std::map<std::string, FlagCapture> captures;
  for (const std::string name :
       {"synth", "release", "detect", "evaluate", "sweep"}) {
    CLI::App* cmd = app.add_subcommand(name);
    AddCommonOptions(cmd, &captures[name]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  const FlagCapture& capture = captures[subcommand];

  try {
    arpdp::PipelineConfig cfg;
    cfg.subcommand = subcommand;
    if (!capture.config_path.empty()) {
      arpdp::LoadConfigFile(cfg, capture.config_path);
      cfg.subcommand = subcommand;  // The CLI subcommand wins.
    }
    for (const auto& [key, value] : capture.overrides) {
      arpdp::ApplyConfigValue(cfg, key, value);
    }
    const arpdp::RunResult result = arpdp::RunPipeline(cfg);
    for (const std::string& warning : result.warnings) {
      std::cerr << "warning: " << warning << "\n";
    }
    for (const std::string& artifact : result.artifacts) {
      std::cout << cfg.out << "/" << artifact << "\n";
    }
    return 0;
  } catch (const arpdp::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const arpdp::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
