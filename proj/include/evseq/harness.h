// Copyright 2026 The evseq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment orchestration and comparison metrics.
//
// Experiment config (JSON):
//
//   {
//     "app": "fixtures/tasklist/app.json",
//     "static_vocab": "fixtures/tasklist/static_vocab.json",  // optional
//     "logs": ["fixtures/tasklist/logs"],   // files or directories of *.log
//     "corpus": "path",                     // token corpus instead of logs
//     "model": "path",                      // trained models instead of both
//     "order": 3,
//     "launch": "CLEAN",
//     "mining_launch": "DIRTY",
//     "scenario_length": 100,
//     "monkey_events": 100,
//     "seeds": [1, 2, 3] | {"first": 1, "count": 30},
//     "strategies": ["BO-up", "INTERP-strange", "I-LM", "monkey", "DFS"],
//     "lambda": 0.5,
//     "interactive_history": "full" | "last",
//     "dfs": {"long_clicks": false, "swipes": false}
//   }
//
// Relative paths resolve against the config file's directory.
//
// Strategy labels:
//   <BO|INTERP>-<up|down|strange>    serial: generate, then validate_serial
//   I-<BO|INTERP>-<flavor>           interactive with one flavor
//   I-LM                             interactive, INTERP, flavors rotate
//                                    up, down, strange over the seed list
//   monkey                           random taps
//   DFS                              one depth-first run (seed-independent)

#ifndef EVSEQ_HARNESS_H_
#define EVSEQ_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "evseq/app_model.h"
#include "evseq/baselines.h"
#include "evseq/chimp.h"
#include "evseq/event.h"
#include "evseq/getevent.h"
#include "evseq/ngram.h"
#include "evseq/simulator.h"

namespace evseq {

struct RunRecord {
  std::uint64_t seed = 0;
  // Flavor or variant used for this run, e.g. "up"; empty when not applicable.
  std::string variant;
  std::size_t steps = 0;
  std::size_t skipped = 0;
  std::size_t fallbacks = 0;
  std::set<std::string> blocks;
  std::set<std::string> activities;
  std::set<GuiEvent> events;
};

struct CoverageReport {
  std::string strategy;
  std::size_t total_blocks = 0;
  std::size_t total_activities = 0;
  std::vector<RunRecord> runs;

  // Percent of blocks/activities covered by runs[0..i].
  std::vector<double> accumulated_block_pct() const;
  std::vector<double> accumulated_activity_pct() const;
  double block_pct() const;
  double activity_pct() const;
  std::set<std::string> covered_blocks() const;
  std::set<std::string> covered_activities() const;
  std::set<GuiEvent> unique_events() const;
  std::vector<std::uint64_t> seeds() const;
};

CoverageReport make_report(std::string strategy, const AppModel& model);

// |unique_events(a) \ unique_events(b)|.
std::size_t diff_events(const CoverageReport& a, const CoverageReport& b);

// Methods whose covered-block fraction under `a` strictly exceeds `b`'s.
std::size_t method_coverage_wins(const CoverageReport& a, const CoverageReport& b,
                                 const AppModel& model);

struct ExperimentConfig {
  std::filesystem::path app;
  std::optional<std::filesystem::path> static_vocab;
  std::vector<std::filesystem::path> logs;
  std::optional<std::filesystem::path> corpus;
  std::optional<std::filesystem::path> model;
  int order = 3;
  LaunchMode launch = LaunchMode::kClean;
  LaunchMode mining_launch = LaunchMode::kDirty;
  int scenario_length = 100;
  std::size_t monkey_events = 100;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> strategies;
  double lambda = 0.5;
  HistoryMode interactive_history = HistoryMode::kFull;
  DfsOptions dfs;
};

// Throws ParseError for malformed configs.
ExperimentConfig parse_experiment_config(const nlohmann::json& j,
                                         const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& file);

// Everything a strategy needs: the app and the trained models.
struct ExperimentInputs {
  AppModel app;
  Vocabulary vocabulary;
  std::vector<EventSequence> corpus;
  std::shared_ptr<const ModelPair> models;
};

// Expands log directories to their *.log files, sorted by name.
std::vector<std::filesystem::path> expand_logs(const std::vector<std::filesystem::path>& paths);

// Mines every log against a fresh session per log. Throws Error naming the
// log when replay fails.
std::vector<EventSequence> mine_logs(const std::vector<std::filesystem::path>& logs,
                                     const AppModel& app, LaunchMode mode);

// Throws Error when the app, corpus, logs, or model file is missing.
ExperimentInputs prepare_inputs(const ExperimentConfig& config);

// Runs one strategy over the config's seeds. Throws Error for an unknown label.
CoverageReport run_strategy(const std::string& strategy, const ExperimentConfig& config,
                            const ExperimentInputs& inputs);

std::vector<CoverageReport> run_experiment(const ExperimentConfig& config,
                                           const ExperimentInputs& inputs);
std::vector<CoverageReport> run_experiment(const ExperimentConfig& config);

// runs.csv columns:
//   strategy,run,seed,variant,steps,skipped,fallbacks,blocks,activities,
//   events,acc_block_pct,acc_activity_pct
std::string runs_csv(const std::vector<CoverageReport>& reports);
// items.csv columns: strategy,run,seed,kind,item   (kind: block|activity|event)
std::string items_csv(const std::vector<CoverageReport>& reports);
// Rebuilds reports from items.csv plus runs.csv.
std::vector<CoverageReport> parse_report_csv(std::string_view runs, std::string_view items,
                                             const AppModel& model);

// Plain-text tables: accumulated coverage per strategy, then the
// diff_events and method_coverage_wins matrices (row = A, column = B).
std::string summary_table(const std::vector<CoverageReport>& reports, const AppModel& model);

// Usage scripts: one "<component> <ACTION>" gesture per line, '#' starts a
// comment. Components are located through encapsulated views, so scripts
// may type on keyboard keys.
struct ScriptResult {
  std::vector<InputCommand> commands;
  // Events as the app dispatched them.
  std::vector<GuiEvent> events;
  std::string log;
};

// Plays the script on a fresh session and renders the touch log. Throws
// ParseError for malformed lines and Error when a gesture does not fire a
// transition.
ScriptResult synthesize_script(std::string_view script, const AppModel& model, LaunchMode mode,
                               const SynthesisOptions& options = {});

// Writes runs.csv, items.csv, and summary.txt into `dir`.
void write_reports(const std::filesystem::path& dir, const std::vector<CoverageReport>& reports,
                   const AppModel& model);

}  // namespace evseq

#endif  // EVSEQ_HARNESS_H_
