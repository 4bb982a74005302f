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

#include "evseq/harness.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "evseq/error.h"
#include "evseq/flavor.h"
#include "evseq/generator.h"
#include "evseq/getevent.h"
#include "evseq/rng.h"
#include "evseq/static_vocab.h"

namespace evseq {
namespace {

namespace fs = std::filesystem;

const std::vector<std::string>& default_strategies() {
  static const std::vector<std::string> kAll = {
      "BO-up", "BO-down", "BO-strange", "INTERP-up", "INTERP-down", "INTERP-strange",
      "I-LM",  "monkey",  "DFS"};
  return kAll;
}

double percent(std::size_t covered, std::size_t total) {
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(covered) / static_cast<double>(total);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename T>
T to_number(std::string_view s, std::size_t line) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ParseError("bad number", line);
  return v;
}

void check_csv_field(const std::string& s) {
  if (s.find_first_of(",\n\r") != std::string::npos) {
    throw Error("value cannot be written to CSV: " + s);
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

struct StrategySpec {
  enum class Kind { kSerial, kInteractive, kPooled, kMonkey, kDfs } kind;
  ModelKind model = ModelKind::kInterpolated;
  Flavor flavor = Flavor::kUp;
};

StrategySpec parse_strategy(const std::string& label) {
  using K = StrategySpec::Kind;
  if (label == "monkey") return {K::kMonkey};
  if (label == "DFS") return {K::kDfs};
  if (label == "I-LM") return {K::kPooled};
  std::string_view rest = label;
  K kind = K::kSerial;
  if (rest.starts_with("I-")) {
    kind = K::kInteractive;
    rest.remove_prefix(2);
  }
  auto dash = rest.find('-');
  if (dash != std::string_view::npos) {
    std::string_view m = rest.substr(0, dash), f = rest.substr(dash + 1);
    auto flavor = parse_flavor(f);
    if (flavor && (m == "BO" || m == "INTERP")) {
      return {kind, m == "BO" ? ModelKind::kBackoff : ModelKind::kInterpolated, *flavor};
    }
  }
  throw Error("unknown strategy: " + label);
}

void fill_from_session(RunRecord& run, const Session& session) {
  run.blocks = session.coverage().blocks();
  run.activities = session.coverage().activities;
}

}  // namespace

std::vector<double> CoverageReport::accumulated_block_pct() const {
  std::vector<double> out;
  std::set<std::string> acc;
  for (const auto& r : runs) {
    acc.insert(r.blocks.begin(), r.blocks.end());
    out.push_back(percent(acc.size(), total_blocks));
  }
  return out;
}

std::vector<double> CoverageReport::accumulated_activity_pct() const {
  std::vector<double> out;
  std::set<std::string> acc;
  for (const auto& r : runs) {
    acc.insert(r.activities.begin(), r.activities.end());
    out.push_back(percent(acc.size(), total_activities));
  }
  return out;
}

double CoverageReport::block_pct() const {
  return percent(covered_blocks().size(), total_blocks);
}

double CoverageReport::activity_pct() const {
  return percent(covered_activities().size(), total_activities);
}

std::set<std::string> CoverageReport::covered_blocks() const {
  std::set<std::string> out;
  for (const auto& r : runs) out.insert(r.blocks.begin(), r.blocks.end());
  return out;
}

std::set<std::string> CoverageReport::covered_activities() const {
  std::set<std::string> out;
  for (const auto& r : runs) out.insert(r.activities.begin(), r.activities.end());
  return out;
}

std::set<GuiEvent> CoverageReport::unique_events() const {
  std::set<GuiEvent> out;
  for (const auto& r : runs) out.insert(r.events.begin(), r.events.end());
  return out;
}

std::vector<std::uint64_t> CoverageReport::seeds() const {
  std::vector<std::uint64_t> out;
  for (const auto& r : runs) out.push_back(r.seed);
  return out;
}

CoverageReport make_report(std::string strategy, const AppModel& model) {
  CoverageReport r;
  r.strategy = std::move(strategy);
  r.total_blocks = model.blocks().size();
  r.total_activities = model.activities.size();
  return r;
}

std::size_t diff_events(const CoverageReport& a, const CoverageReport& b) {
  std::set<GuiEvent> ea = a.unique_events(), eb = b.unique_events();
  return static_cast<std::size_t>(std::count_if(
      ea.begin(), ea.end(), [&](const GuiEvent& e) { return !eb.contains(e); }));
}

std::size_t method_coverage_wins(const CoverageReport& a, const CoverageReport& b,
                                 const AppModel& model) {
  std::set<std::string> ca = a.covered_blocks(), cb = b.covered_blocks();
  std::size_t wins = 0;
  for (const auto& [method, blocks] : model.methods) {
    if (blocks.empty()) continue;
    std::size_t na = 0, nb = 0;
    for (const auto& blk : blocks) {
      na += ca.contains(blk);
      nb += cb.contains(blk);
    }
    if (na > nb) ++wins;  // same denominator
  }
  return wins;
}

ExperimentConfig parse_experiment_config(const nlohmann::json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ParseError("experiment config must be an object");
  ExperimentConfig c;
  try {
    c.app = resolve(base_dir, j.at("app").get<std::string>());
    if (j.contains("static_vocab")) {
      c.static_vocab = resolve(base_dir, j["static_vocab"].get<std::string>());
    }
    if (j.contains("logs")) {
      for (const auto& p : j["logs"]) c.logs.push_back(resolve(base_dir, p.get<std::string>()));
    }
    if (j.contains("corpus")) c.corpus = resolve(base_dir, j["corpus"].get<std::string>());
    if (j.contains("model")) c.model = resolve(base_dir, j["model"].get<std::string>());
    c.order = j.value("order", 3);
    auto launch = [&](const char* key, LaunchMode fallback) {
      if (!j.contains(key)) return fallback;
      auto m = parse_launch_mode(j[key].get<std::string>());
      if (!m) throw ParseError(std::string("bad ") + key);
      return *m;
    };
    c.launch = launch("launch", LaunchMode::kClean);
    c.mining_launch = launch("mining_launch", LaunchMode::kDirty);
    c.scenario_length = j.value("scenario_length", 100);
    c.monkey_events = j.value("monkey_events", std::size_t{100});
    if (j.contains("seeds")) {
      const auto& s = j["seeds"];
      if (s.is_array()) {
        for (const auto& v : s) c.seeds.push_back(v.get<std::uint64_t>());
      } else {
        auto first = s.at("first").get<std::uint64_t>();
        auto count = s.at("count").get<std::uint64_t>();
        for (std::uint64_t i = 0; i < count; ++i) c.seeds.push_back(first + i);
      }
    } else {
      c.seeds = {1};
    }
    c.strategies = j.contains("strategies") ? j["strategies"].get<std::vector<std::string>>()
                                            : default_strategies();
    c.lambda = j.value("lambda", kDefaultLambda);
    std::string hist = j.value("interactive_history", std::string("full"));
    if (hist == "full") {
      c.interactive_history = HistoryMode::kFull;
    } else if (hist == "last") {
      c.interactive_history = HistoryMode::kLastOne;
    } else {
      throw ParseError("interactive_history must be full or last");
    }
    if (j.contains("dfs")) {
      c.dfs.long_clicks = j["dfs"].value("long_clicks", false);
      c.dfs.swipes = j["dfs"].value("swipes", false);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
  if (c.order < 1) throw ParseError("order must be positive");
  if (c.scenario_length < 1) throw ParseError("scenario_length must be positive");
  if (c.seeds.empty()) throw ParseError("seed list is empty");
  if (c.lambda < 0.0 || c.lambda > 1.0) throw ParseError("lambda must be in [0, 1]");
  for (const auto& s : c.strategies) parse_strategy(s);
  if (!c.model && !c.corpus && c.logs.empty()) {
    throw ParseError("config needs one of model, corpus, logs");
  }
  return c;
}

ExperimentConfig load_experiment_config(const fs::path& file) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(file));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  return parse_experiment_config(j, file.parent_path());
}

std::vector<fs::path> expand_logs(const std::vector<fs::path>& paths) {
  std::vector<fs::path> out;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".log") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::exists(p)) {
      out.push_back(p);
    } else {
      throw Error("missing log: " + p.string());
    }
  }
  return out;
}

std::vector<EventSequence> mine_logs(const std::vector<fs::path>& logs, const AppModel& app,
                                     LaunchMode mode) {
  std::vector<EventSequence> corpus;
  for (const auto& file : logs) {
    Session session(app, mode);
    MineResult r = mine_log(read_file(file), session, session, {}, file.stem().string());
    if (r.error) throw Error(file.string() + ": " + *r.error);
    if (!r.sequence.tokens.empty()) corpus.push_back(std::move(r.sequence));
  }
  return corpus;
}

ExperimentInputs prepare_inputs(const ExperimentConfig& config) {
  if (!fs::exists(config.app)) throw Error("missing app model: " + config.app.string());
  ExperimentInputs in{load_app_model(config.app), {}, {}, nullptr};
  if (config.model) {
    if (!fs::exists(*config.model)) throw Error("missing model: " + config.model->string());
    LoadedModels lm = load_models(nlohmann::json::parse(read_file(*config.model)));
    in.vocabulary = lm.models.backoff.vocabulary();
    in.models = std::make_shared<const ModelPair>(std::move(lm.models));
    return in;
  }
  if (config.corpus) {
    if (!fs::exists(*config.corpus)) throw Error("missing corpus: " + config.corpus->string());
    in.corpus = parse_corpus(read_file(*config.corpus));
  } else {
    in.corpus = mine_logs(expand_logs(config.logs), in.app, config.mining_launch);
  }
  in.vocabulary = mined_vocabulary(in.corpus);
  if (config.static_vocab) {
    in.vocabulary = merge_vocabulary(in.vocabulary, load_static_vocabulary(*config.static_vocab));
  }
  in.models = std::make_shared<const ModelPair>(train(in.corpus, in.vocabulary, config.order));
  return in;
}

CoverageReport run_strategy(const std::string& strategy, const ExperimentConfig& config,
                            const ExperimentInputs& inputs) {
  using K = StrategySpec::Kind;
  StrategySpec spec = parse_strategy(strategy);
  CoverageReport report = make_report(strategy, inputs.app);
  const std::uint64_t salt = hash_string(strategy);

  if (spec.kind == K::kDfs) {
    Session session(inputs.app, config.launch);
    DfsResult r = run_dfs(session, config.dfs);
    RunRecord run;
    run.steps = r.commands.size();
    run.events.insert(r.events.begin(), r.events.end());
    fill_from_session(run, session);
    report.runs.push_back(std::move(run));
    return report;
  }

  static constexpr Flavor kRotation[] = {Flavor::kUp, Flavor::kDown, Flavor::kStrange};
  for (std::size_t i = 0; i < config.seeds.size(); ++i) {
    RunRecord run;
    run.seed = config.seeds[i];
    Rng rng(mix_seed(run.seed, salt));
    Session session(inputs.app, config.launch);
    switch (spec.kind) {
      case K::kMonkey: {
        ExplorationResult r = run_monkey(session, config.monkey_events, rng);
        run.steps = r.commands.size();
        run.events.insert(r.events.begin(), r.events.end());
        break;
      }
      case K::kSerial: {
        FlavorConfig fc = FlavorConfig::of(spec.flavor, config.lambda);
        run.variant = std::string(to_string(spec.flavor));
        GenerationResponse g = generate_sequence(inputs.models->get(spec.model), fc, {},
                                                 config.scenario_length, rng);
        SerialResult r = validate_serial(g.tokens, session, strategy, run.seed);
        run.steps = r.scenario.steps.size();
        run.skipped = r.skipped.size();
        for (const auto& s : r.scenario.steps) run.events.insert(s.event);
        break;
      }
      case K::kInteractive:
      case K::kPooled: {
        Flavor f = spec.kind == K::kPooled ? kRotation[i % 3] : spec.flavor;
        FlavorConfig fc = FlavorConfig::of(f, config.lambda);
        run.variant = std::string(to_string(f));
        EventProposer propose = model_proposer(inputs.models->get(spec.model), fc);
        InteractiveResult r = validate_interactive(config.scenario_length, propose, session, rng,
                                                   config.interactive_history, strategy, run.seed);
        run.steps = r.scenario.steps.size();
        run.fallbacks = r.fallbacks;
        for (const auto& s : r.scenario.steps) run.events.insert(s.event);
        break;
      }
      case K::kDfs:
        break;
    }
    fill_from_session(run, session);
    report.runs.push_back(std::move(run));
  }
  return report;
}

std::vector<CoverageReport> run_experiment(const ExperimentConfig& config,
                                           const ExperimentInputs& inputs) {
  std::vector<CoverageReport> out;
  for (const auto& s : config.strategies) out.push_back(run_strategy(s, config, inputs));
  return out;
}

std::vector<CoverageReport> run_experiment(const ExperimentConfig& config) {
  return run_experiment(config, prepare_inputs(config));
}

std::string runs_csv(const std::vector<CoverageReport>& reports) {
  std::ostringstream os;
  os << "strategy,run,seed,variant,steps,skipped,fallbacks,blocks,activities,events,"
        "acc_block_pct,acc_activity_pct\n";
  for (const auto& rep : reports) {
    check_csv_field(rep.strategy);
    auto accb = rep.accumulated_block_pct();
    auto acca = rep.accumulated_activity_pct();
    for (std::size_t i = 0; i < rep.runs.size(); ++i) {
      const auto& r = rep.runs[i];
      os << rep.strategy << ',' << (i + 1) << ',' << r.seed << ',' << r.variant << ','
         << r.steps << ',' << r.skipped << ',' << r.fallbacks << ',' << r.blocks.size() << ','
         << r.activities.size() << ',' << r.events.size() << ',' << fixed2(accb[i]) << ','
         << fixed2(acca[i]) << '\n';
    }
  }
  return os.str();
}

std::string items_csv(const std::vector<CoverageReport>& reports) {
  std::ostringstream os;
  os << "strategy,run,seed,kind,item\n";
  for (const auto& rep : reports) {
    for (std::size_t i = 0; i < rep.runs.size(); ++i) {
      const auto& r = rep.runs[i];
      auto row = [&](std::string_view kind, const std::string& item) {
        check_csv_field(item);
        os << rep.strategy << ',' << (i + 1) << ',' << r.seed << ',' << kind << ',' << item
           << '\n';
      };
      for (const auto& b : r.blocks) row("block", b);
      for (const auto& a : r.activities) row("activity", a);
      for (const auto& e : r.events) row("event", encode_token(e).text());
    }
  }
  return os.str();
}

std::vector<CoverageReport> parse_report_csv(std::string_view runs, std::string_view items,
                                             const AppModel& model) {
  std::vector<CoverageReport> reports;
  std::map<std::string, std::size_t> index;
  auto lines_of = [](std::string_view text) {
    std::vector<std::string_view> out;
    for (std::string_view l : split(text, '\n')) {
      if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
      out.push_back(l);
    }
    return out;
  };

  auto run_lines = lines_of(runs);
  for (std::size_t n = 1; n < run_lines.size(); ++n) {
    if (run_lines[n].empty()) continue;
    auto f = split(run_lines[n], ',');
    if (f.size() != 12) throw ParseError("runs.csv: expected 12 columns", n + 1);
    std::string strategy(f[0]);
    auto [it, fresh] = index.emplace(strategy, reports.size());
    if (fresh) reports.push_back(make_report(strategy, model));
    CoverageReport& rep = reports[it->second];
    if (to_number<std::size_t>(f[1], n + 1) != rep.runs.size() + 1) {
      throw ParseError("runs.csv: run numbers must count up from 1", n + 1);
    }
    RunRecord r;
    r.seed = to_number<std::uint64_t>(f[2], n + 1);
    r.variant = std::string(f[3]);
    r.steps = to_number<std::size_t>(f[4], n + 1);
    r.skipped = to_number<std::size_t>(f[5], n + 1);
    r.fallbacks = to_number<std::size_t>(f[6], n + 1);
    rep.runs.push_back(std::move(r));
  }

  auto item_lines = lines_of(items);
  for (std::size_t n = 1; n < item_lines.size(); ++n) {
    if (item_lines[n].empty()) continue;
    auto f = split(item_lines[n], ',');
    if (f.size() != 5) throw ParseError("items.csv: expected 5 columns", n + 1);
    auto it = index.find(std::string(f[0]));
    if (it == index.end()) throw ParseError("items.csv: unknown strategy", n + 1);
    CoverageReport& rep = reports[it->second];
    auto run = to_number<std::size_t>(f[1], n + 1);
    if (run < 1 || run > rep.runs.size()) throw ParseError("items.csv: unknown run", n + 1);
    RunRecord& r = rep.runs[run - 1];
    std::string item(f[4]);
    if (f[3] == "block") {
      r.blocks.insert(item);
    } else if (f[3] == "activity") {
      r.activities.insert(item);
    } else if (f[3] == "event") {
      try {
        r.events.insert(decode_token(EventToken(item)));
      } catch (const EncodingError& e) {
        throw ParseError(e.what(), n + 1);
      }
    } else {
      throw ParseError("items.csv: unknown kind", n + 1);
    }
  }
  return reports;
}

std::string summary_table(const std::vector<CoverageReport>& reports, const AppModel& model) {
  std::size_t w = 8;
  for (const auto& r : reports) w = std::max(w, r.strategy.size());
  auto pad = [](std::string s, std::size_t width, bool left) {
    if (s.size() >= width) return s;
    std::string fill(width - s.size(), ' ');
    return left ? s + fill : fill + s;
  };

  std::ostringstream os;
  os << "app: " << model.name << " (" << model.blocks().size() << " blocks, "
     << model.activities.size() << " activities)\n\n";
  os << pad("strategy", w, true) << "  " << pad("runs", 5, false) << "  "
     << pad("block%", 7, false) << "  " << pad("activity%", 9, false) << "  "
     << pad("events", 6, false) << '\n';
  for (const auto& r : reports) {
    os << pad(r.strategy, w, true) << "  " << pad(std::to_string(r.runs.size()), 5, false)
       << "  " << pad(fixed2(r.block_pct()), 7, false) << "  "
       << pad(fixed2(r.activity_pct()), 9, false) << "  "
       << pad(std::to_string(r.unique_events().size()), 6, false) << '\n';
  }

  auto matrix = [&](const std::string& title, auto&& cell) {
    os << '\n' << title << '\n' << pad("A \\ B", w, true);
    for (const auto& b : reports) os << "  " << pad(b.strategy, b.strategy.size(), false);
    os << '\n';
    for (const auto& a : reports) {
      os << pad(a.strategy, w, true);
      for (const auto& b : reports) {
        os << "  " << pad(std::to_string(cell(a, b)), b.strategy.size(), false);
      }
      os << '\n';
    }
  };
  matrix("events executed by A and not by B",
         [](const CoverageReport& a, const CoverageReport& b) { return diff_events(a, b); });
  matrix("methods with higher coverage under A than B",
         [&](const CoverageReport& a, const CoverageReport& b) {
           return method_coverage_wins(a, b, model);
         });

  os << "\nseeds:\n";
  for (const auto& r : reports) {
    os << pad(r.strategy, w, true) << " ";
    for (auto s : r.seeds()) os << ' ' << s;
    os << '\n';
  }
  return os.str();
}

ScriptResult synthesize_script(std::string_view script, const AppModel& model, LaunchMode mode,
                               const SynthesisOptions& options) {
  ScriptResult out;
  Session session(model, mode);
  std::size_t line_no = 0;
  for (std::string_view line : split(script, '\n')) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::string_view> words;
    for (std::string_view w : split(line, ' ')) {
      while (!w.empty() && (w.back() == '\r' || w.back() == '\t')) w.remove_suffix(1);
      if (!w.empty()) words.push_back(w);
    }
    if (words.empty()) continue;
    if (words.size() != 2) throw ParseError("expected '<component> <ACTION>'", line_no);
    auto action = parse_action(words[1]);
    if (!action) throw ParseError("unknown action " + std::string(words[1]), line_no);
    auto target = find_input_target(model, session.state(), words[0]);
    if (!target) {
      throw Error("script line " + std::to_string(line_no) + ": " + std::string(words[0]) +
                  " is not reachable in " + session.state().key());
    }
    InputCommand cmd = build_input_command(*action, target->bounds);
    StepResult r = session.execute(cmd);
    if (!r.event) {
      throw Error("script line " + std::to_string(line_no) + ": " + std::string(words[0]) + " " +
                  std::string(words[1]) + " fires no transition");
    }
    out.commands.push_back(cmd);
    out.events.push_back(*r.event);
  }
  out.log = synthesize_log(out.commands, options);
  return out;
}

void write_reports(const fs::path& dir, const std::vector<CoverageReport>& reports,
                   const AppModel& model) {
  fs::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / name).string());
    out << text;
  };
  write("runs.csv", runs_csv(reports));
  write("items.csv", items_csv(reports));
  write("summary.txt", summary_table(reports, model));
}

}  // namespace evseq
