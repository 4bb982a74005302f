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

// Command-line front end: mine logs, train and serve models, generate and
// validate scenarios, run the baselines, and run whole experiments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "evseq/app_model.h"
#include "evseq/baselines.h"
#include "evseq/chimp.h"
#include "evseq/error.h"
#include "evseq/event.h"
#include "evseq/flavor.h"
#include "evseq/generator.h"
#include "evseq/getevent.h"
#include "evseq/harness.h"
#include "evseq/ngram.h"
#include "evseq/rng.h"
#include "evseq/simulator.h"
#include "evseq/static_vocab.h"

namespace {

using namespace evseq;

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

LaunchMode launch_mode(const std::string& s) {
  auto m = parse_launch_mode(s);
  if (!m) throw Error("launch mode must be CLEAN or DIRTY");
  return *m;
}

ModelKind model_kind(const std::string& s) {
  if (s == "BO") return ModelKind::kBackoff;
  if (s == "INTERP") return ModelKind::kInterpolated;
  throw Error("model must be BO or INTERP");
}

Flavor flavor_of(const std::string& s) {
  auto f = parse_flavor(s);
  if (!f) throw Error("flavor must be up, down, or strange");
  return *f;
}

LoadedModels load_model_file(const std::string& path) {
  return load_models(nlohmann::json::parse(read_file(path)));
}

std::vector<EventToken> read_tokens(const std::string& path) {
  std::vector<EventToken> out;
  for (const auto& seq : parse_corpus(read_file(path))) {
    out.insert(out.end(), seq.tokens.begin(), seq.tokens.end());
  }
  return out;
}

std::string event_lines(const std::vector<GuiEvent>& events) {
  std::string out;
  for (const auto& e : events) out += encode_token(e).text() + "\n";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evseq: GUI event-sequence mining, generation, and validation"};
  app.require_subcommand(1);

  // mine
  auto* mine = app.add_subcommand("mine", "Translate touch logs into an event corpus");
  std::string mine_app, mine_launch = "DIRTY", mine_out;
  std::vector<std::string> mine_logs_in;
  mine->add_option("--app", mine_app, "App model JSON")->required();
  mine->add_option("--launch", mine_launch, "Launch mode of the recorded sessions");
  mine->add_option("-o,--output", mine_out, "Corpus file (default stdout)");
  mine->add_option("logs", mine_logs_in, "Log files or directories")->required();

  // train
  auto* trn = app.add_subcommand("train", "Train both n-gram models");
  std::string trn_corpus, trn_static, trn_out;
  int trn_order = 3, trn_cutoff = 5;
  bool trn_no_discount = false;
  trn->add_option("--corpus", trn_corpus, "Token corpus")->required();
  trn->add_option("--static-vocab", trn_static, "Static component declarations");
  trn->add_option("--order", trn_order, "n-gram order")->check(CLI::PositiveNumber);
  trn->add_option("--katz-cutoff", trn_cutoff, "Largest count Good-Turing discounts");
  trn->add_flag("--no-discount", trn_no_discount, "Back-off model without discounting");
  trn->add_option("-o,--output", trn_out, "Model file (default stdout)");

  // serve
  auto* srv = app.add_subcommand("serve", "Answer generation requests");
  std::string srv_model, srv_socket;
  std::uint64_t srv_seed = 0;
  int srv_max = 0;
  srv->add_option("--model", srv_model, "Model file")->required();
  srv->add_option("--socket", srv_socket, "Unix socket path (default stdin/stdout)");
  srv->add_option("--seed", srv_seed, "Default seed (EVSEQ_SEED overrides)");
  srv->add_option("--max-connections", srv_max, "Exit after this many connections");

  // generate
  auto* gen = app.add_subcommand("generate", "Sample one event sequence");
  std::string gen_model, gen_kind = "INTERP", gen_flavor = "up";
  int gen_length = 100;
  std::uint64_t gen_seed = 0;
  double gen_lambda = kDefaultLambda;
  std::vector<std::string> gen_history;
  bool gen_logprobs = false;
  gen->add_option("--model", gen_model, "Model file")->required();
  gen->add_option("--kind", gen_kind, "BO or INTERP");
  gen->add_option("--flavor", gen_flavor, "up, down, or strange");
  gen->add_option("--length", gen_length, "Number of events")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--lambda", gen_lambda, "Mixture weight for strange")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--history", gen_history, "Preceding event tokens");
  gen->add_flag("--logprobs", gen_logprobs, "Append the natural-log probability to each line");

  // validate
  auto* val = app.add_subcommand("validate", "Turn generated events into an actionable scenario");
  std::string val_app, val_launch = "CLEAN", val_mode = "serial", val_seq, val_model;
  std::string val_kind = "INTERP", val_flavor = "up", val_history = "full", val_out, val_cov;
  std::string val_replay;
  int val_steps = 100;
  std::uint64_t val_seed = 0;
  double val_lambda = kDefaultLambda;
  val->add_option("--app", val_app, "App model JSON")->required();
  val->add_option("--launch", val_launch, "CLEAN or DIRTY");
  val->add_option("--mode", val_mode, "serial or interactive")
      ->check(CLI::IsMember({"serial", "interactive"}));
  val->add_option("--sequence", val_seq, "Token file to validate (serial)");
  val->add_option("--model", val_model, "Model file (interactive)");
  val->add_option("--kind", val_kind, "BO or INTERP (interactive)");
  val->add_option("--flavor", val_flavor, "up, down, or strange (interactive)");
  val->add_option("--lambda", val_lambda, "Mixture weight for strange")->check(CLI::Range(0.0, 1.0));
  val->add_option("--steps", val_steps, "Scenario length (interactive)")->check(CLI::PositiveNumber);
  val->add_option("--seed", val_seed, "RNG seed (interactive)");
  val->add_option("--history", val_history, "full or last (interactive)")
      ->check(CLI::IsMember({"full", "last"}));
  val->add_option("--replay", val_replay, "Replay a scenario file instead and check it");
  val->add_option("-o,--output", val_out, "Scenario file (default stdout)");
  val->add_option("--coverage", val_cov, "Write block coverage CSV here");

  // monkey
  auto* mky = app.add_subcommand("monkey", "Random taps");
  std::string mky_app, mky_launch = "CLEAN", mky_cov;
  std::size_t mky_events = 100;
  std::uint64_t mky_seed = 0;
  mky->add_option("--app", mky_app, "App model JSON")->required();
  mky->add_option("--launch", mky_launch, "CLEAN or DIRTY");
  mky->add_option("--events", mky_events, "Number of taps");
  mky->add_option("--seed", mky_seed, "RNG seed");
  mky->add_option("--coverage", mky_cov, "Write block coverage CSV here");

  // dfs
  auto* dfs = app.add_subcommand("dfs", "Depth-first exploration");
  std::string dfs_app, dfs_launch = "CLEAN", dfs_cov;
  DfsOptions dfs_opts;
  dfs->add_option("--app", dfs_app, "App model JSON")->required();
  dfs->add_option("--launch", dfs_launch, "CLEAN or DIRTY");
  dfs->add_flag("--long-clicks", dfs_opts.long_clicks, "Also try long clicks");
  dfs->add_flag("--swipes", dfs_opts.swipes, "Also try swipes");
  dfs->add_option("--coverage", dfs_cov, "Write block coverage CSV here");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run every strategy of a config");
  std::string exp_config, exp_out;
  exp->add_option("--config", exp_config, "Experiment config JSON")->required();
  exp->add_option("--out", exp_out, "Directory for runs.csv, items.csv, summary.txt");

  // report
  auto* rep = app.add_subcommand("report", "Summarize saved experiment reports");
  std::string rep_dir, rep_app;
  rep->add_option("--dir", rep_dir, "Directory holding runs.csv and items.csv")->required();
  rep->add_option("--app", rep_app, "App model JSON")->required();

  // synth
  auto* syn = app.add_subcommand("synth", "Render a usage script as a touch log");
  std::string syn_app, syn_launch = "DIRTY", syn_script, syn_out;
  std::int64_t syn_start = 10'000'000;
  syn->add_option("--app", syn_app, "App model JSON")->required();
  syn->add_option("--launch", syn_launch, "CLEAN or DIRTY");
  syn->add_option("--script", syn_script, "Script file")->required();
  syn->add_option("--start-us", syn_start, "Timestamp of the first gesture");
  syn->add_option("-o,--output", syn_out, "Log file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*mine) {
      AppModel model = load_app_model(mine_app);
      auto corpus = mine_logs(expand_logs({mine_logs_in.begin(), mine_logs_in.end()}), model,
                              launch_mode(mine_launch));
      write_output(mine_out, format_corpus(corpus));
    } else if (*trn) {
      auto corpus = parse_corpus(read_file(trn_corpus));
      Vocabulary vocab = mined_vocabulary(corpus);
      if (!trn_static.empty()) vocab = merge_vocabulary(vocab, load_static_vocabulary(trn_static));
      SmoothingOptions opts;
      opts.katz_cutoff = trn_cutoff;
      opts.discounting = !trn_no_discount;
      NGramCounts counts = count_corpus(corpus, vocab, trn_order);
      write_output(trn_out, save_models(counts, opts).dump(1) + "\n");
    } else if (*srv) {
      LoadedModels lm = load_model_file(srv_model);
      SequenceGenerator g(std::make_shared<const ModelPair>(std::move(lm.models)),
                          default_seed_from_env(srv_seed));
      if (srv_socket.empty()) {
        g.serve(std::cin, std::cout);
      } else {
        g.serve_unix_socket(srv_socket, srv_max);
      }
    } else if (*gen) {
      LoadedModels lm = load_model_file(gen_model);
      std::vector<EventToken> history;
      for (const auto& h : gen_history) history.emplace_back(h);
      Rng rng(gen_seed);
      GenerationResponse r =
          generate_sequence(lm.models.get(model_kind(gen_kind)),
                            FlavorConfig::of(flavor_of(gen_flavor), gen_lambda), history,
                            gen_length, rng);
      for (std::size_t i = 0; i < r.tokens.size(); ++i) {
        std::cout << r.tokens[i].text();
        if (gen_logprobs) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "\t%.6f", r.logprobs[i]);
          std::cout << buf;
        }
        std::cout << '\n';
      }
    } else if (*val) {
      AppModel model = load_app_model(val_app);
      if (!val_replay.empty()) {
        ActionableScenario s = parse_scenario(read_file(val_replay));
        ReplayResult r = replay_scenario(s, model);
        if (!val_cov.empty()) write_output(val_cov, coverage_csv(model, r.coverage));
        std::cout << "replayed " << r.steps_replayed << " of " << s.steps.size() << " steps: "
                  << (r.actionable ? "actionable" : "NOT actionable") << '\n';
        return r.actionable ? 0 : 3;
      }
      Session session(model, launch_mode(val_launch));
      ActionableScenario scenario;
      if (val_mode == "serial") {
        if (val_seq.empty()) throw Error("serial validation needs --sequence");
        SerialResult r = validate_serial(read_tokens(val_seq), session, "serial", val_seed);
        std::cerr << "executed " << r.executed.size() << ", skipped " << r.skipped.size() << '\n';
        scenario = std::move(r.scenario);
      } else {
        if (val_model.empty()) throw Error("interactive validation needs --model");
        LoadedModels lm = load_model_file(val_model);
        FlavorConfig fc = FlavorConfig::of(flavor_of(val_flavor), val_lambda);
        EventProposer propose = model_proposer(lm.models.get(model_kind(val_kind)), fc);
        Rng rng(val_seed);
        InteractiveResult r = validate_interactive(
            val_steps, propose, session, rng,
            val_history == "last" ? HistoryMode::kLastOne : HistoryMode::kFull,
            "I-" + val_kind + "-" + val_flavor, val_seed);
        std::cerr << "steps " << r.scenario.steps.size() << ", fallbacks " << r.fallbacks
                  << (r.aborted ? ", aborted" : "") << '\n';
        scenario = std::move(r.scenario);
      }
      write_output(val_out, format_scenario(scenario));
      if (!val_cov.empty()) write_output(val_cov, coverage_csv(model, session.coverage()));
      if (scenario.steps.empty()) return 4;
    } else if (*mky) {
      AppModel model = load_app_model(mky_app);
      Session session(model, launch_mode(mky_launch));
      Rng rng(mky_seed);
      ExplorationResult r = run_monkey(session, mky_events, rng);
      std::cout << event_lines(r.events);
      std::cerr << coverage_summary(model, r.coverage).dump() << '\n';
      if (!mky_cov.empty()) write_output(mky_cov, coverage_csv(model, r.coverage));
    } else if (*dfs) {
      AppModel model = load_app_model(dfs_app);
      Session session(model, launch_mode(dfs_launch));
      DfsResult r = run_dfs(session, dfs_opts);
      std::cout << event_lines(r.events);
      std::cerr << "states " << r.visited_states.size() << ", inputs " << r.commands.size()
                << '\n'
                << coverage_summary(model, r.coverage).dump() << '\n';
      if (!dfs_cov.empty()) write_output(dfs_cov, coverage_csv(model, r.coverage));
    } else if (*exp) {
      ExperimentConfig cfg = load_experiment_config(exp_config);
      ExperimentInputs inputs = prepare_inputs(cfg);
      auto reports = run_experiment(cfg, inputs);
      if (!exp_out.empty()) write_reports(exp_out, reports, inputs.app);
      std::cout << summary_table(reports, inputs.app);
    } else if (*rep) {
      AppModel model = load_app_model(rep_app);
      std::filesystem::path dir(rep_dir);
      auto reports = parse_report_csv(read_file((dir / "runs.csv").string()),
                                      read_file((dir / "items.csv").string()), model);
      std::cout << summary_table(reports, model);
    } else if (*syn) {
      AppModel model = load_app_model(syn_app);
      SynthesisOptions opts;
      opts.start_us = syn_start;
      ScriptResult r =
          synthesize_script(read_file(syn_script), model, launch_mode(syn_launch), opts);
      write_output(syn_out, r.log);
    }
  } catch (const std::exception& e) {
    std::cerr << "evseq: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
