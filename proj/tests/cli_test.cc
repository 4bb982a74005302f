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

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "test_util.h"

namespace evseq {
namespace {

namespace fs = std::filesystem;
using testing::read_text;
using testing::source_path;

struct CliRun {
  int code;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(EVSEQ_CLI) + " " + args + " 2>/dev/null";
  FILE* p = ::popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = ::pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("evseq_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }
  static std::string tmp(const std::string& name) { return (dir_ / name).string(); }
  static std::string app() { return source_path("fixtures/tasklist/app.json").string(); }

  // Mines the fixture logs and trains a model once for the whole suite.
  static std::string model() {
    static const std::string path = [] {
      CliRun m = run("mine --app " + app() + " --launch DIRTY -o " + tmp("corpus.txt") + " " +
                  source_path("fixtures/tasklist/logs").string());
      EXPECT_EQ(m.code, 0);
      CliRun t = run("train --corpus " + tmp("corpus.txt") + " --static-vocab " +
                  source_path("fixtures/tasklist/static_vocab.json").string() +
                  " --order 3 -o " + tmp("model.json"));
      EXPECT_EQ(t.code, 0);
      return tmp("model.json");
    }();
    return path;
  }

  static fs::path dir_;
};

fs::path Cli::dir_;

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("train").code, 2);
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("train --corpus " + tmp("missing.txt")).code, 1);
}

TEST_F(Cli, MineWritesOneSequencePerLog) {
  model();
  const std::string corpus = read_text(tmp("corpus.txt"));
  std::size_t logs = 0;
  for (const auto& e : fs::directory_iterator(source_path("fixtures/tasklist/logs"))) {
    logs += e.path().extension() == ".log";
  }
  std::size_t blanks = 0;
  for (std::size_t i = 1; i < corpus.size(); ++i) blanks += corpus[i] == '\n' && corpus[i - 1] == '\n';
  EXPECT_EQ(blanks + 1, logs);
  auto doc = nlohmann::json::parse(read_text(model()));
  EXPECT_EQ(doc["format"], "evseq-ngram");
}

TEST_F(Cli, GenerateIsSeeded) {
  const std::string args = "generate --model " + model() + " --kind INTERP --flavor strange --length 15 --seed 4";
  CliRun a = run(args), b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 15);
  CliRun lp = run("generate --model " + model() + " --length 3 --seed 4 --logprobs");
  EXPECT_NE(lp.out.find('\t'), std::string::npos);
  EXPECT_EQ(run("generate --model " + model() + " --flavor sideways").code, 1);
}

TEST_F(Cli, ServeAnswersOverStdio) {
  {
    std::ofstream req(tmp("req.jsonl"));
    req << R"({"model": "BO", "flavor": "up", "history": [], "length": 3, "seed": 1})" << '\n'
        << "nonsense\n";
  }
  CliRun r = run("serve --model " + model() + " < " + tmp("req.jsonl"));
  EXPECT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::string first, second;
  std::getline(lines, first);
  std::getline(lines, second);
  EXPECT_EQ(nlohmann::json::parse(first)["tokens"].size(), 3u);
  EXPECT_TRUE(nlohmann::json::parse(second)["error"].is_string());
}

TEST_F(Cli, ValidateAndReplay) {
  CliRun gen = run("generate --model " + model() + " --kind INTERP --length 40 --seed 2");
  {
    std::ofstream(tmp("seq.txt")) << gen.out;
  }
  CliRun serial = run("validate --app " + app() + " --launch DIRTY --mode serial --sequence " +
                   tmp("seq.txt") + " -o " + tmp("serial.scn"));
  EXPECT_EQ(serial.code, 0);
  EXPECT_TRUE(read_text(tmp("serial.scn")).starts_with("# scenario origin=serial"));

  CliRun inter = run("validate --app " + app() + " --mode interactive --model " + model() +
                  " --steps 25 --seed 3 -o " + tmp("inter.scn") + " --coverage " + tmp("cov.csv"));
  EXPECT_EQ(inter.code, 0);
  const std::string scn = read_text(tmp("inter.scn"));
  EXPECT_NE(scn.find("steps=25"), std::string::npos);
  CliRun replay = run("validate --app " + app() + " --replay " + tmp("inter.scn") + " --coverage " +
                   tmp("cov2.csv"));
  EXPECT_EQ(replay.code, 0);
  EXPECT_EQ(read_text(tmp("cov.csv")), read_text(tmp("cov2.csv")));

  // The same scenario under the other launch mode diverges at the first step.
  std::string dirty = scn;
  dirty.replace(dirty.find("launch=CLEAN"), 12, "launch=DIRTY");
  std::ofstream(tmp("dirty.scn")) << dirty;
  EXPECT_EQ(run("validate --app " + app() + " --replay " + tmp("dirty.scn")).code, 3);

  // Nothing feasible under the welcome dialog: empty scenario.
  std::ofstream(tmp("blocked.txt")) << "MainActivity#ACTIVITY#btn_add#CLICK#Button\n";
  EXPECT_EQ(run("validate --app " + app() + " --mode serial --sequence " + tmp("blocked.txt"))
                .code,
            4);
}

TEST_F(Cli, Baselines) {
  CliRun m1 = run("monkey --app " + app() + " --events 50 --seed 9");
  CliRun m2 = run("monkey --app " + app() + " --events 50 --seed 9");
  EXPECT_EQ(m1.code, 0);
  EXPECT_EQ(m1.out, m2.out);
  CliRun d = run("dfs --app " + app() + " --launch DIRTY --coverage " + tmp("dfs.csv"));
  EXPECT_EQ(d.code, 0);
  EXPECT_EQ(d.out.find("key_"), std::string::npos);
  EXPECT_TRUE(read_text(tmp("dfs.csv")).starts_with("block,method,hits\n"));
}

TEST_F(Cli, ExperimentAndReport) {
  nlohmann::json cfg = nlohmann::json::parse(read_text(source_path("configs/tasklist_clean.json")));
  cfg["app"] = app();
  cfg["static_vocab"] = source_path("fixtures/tasklist/static_vocab.json").string();
  cfg["logs"] = {source_path("fixtures/tasklist/logs").string()};
  cfg["seeds"] = {1, 2, 3};
  cfg["scenario_length"] = 20;
  cfg["strategies"] = {"INTERP-up", "I-LM", "monkey"};
  std::ofstream(tmp("cfg.json")) << cfg.dump();
  CliRun e = run("experiment --config " + tmp("cfg.json") + " --out " + tmp("out"));
  EXPECT_EQ(e.code, 0);
  EXPECT_NE(e.out.find("I-LM"), std::string::npos);
  CliRun again = run("experiment --config " + tmp("cfg.json") + " --out " + tmp("out2"));
  EXPECT_EQ(read_text(tmp("out/runs.csv")), read_text(tmp("out2/runs.csv")));
  EXPECT_EQ(read_text(tmp("out/items.csv")), read_text(tmp("out2/items.csv")));
  CliRun rep = run("report --dir " + tmp("out") + " --app " + app());
  EXPECT_EQ(rep.code, 0);
  EXPECT_EQ(rep.out, read_text(tmp("out/summary.txt")));
}

TEST_F(Cli, SynthReproducesFixtureLog) {
  CliRun s = run("synth --app " + app() + " --launch DIRTY --script " +
              source_path("fixtures/tasklist/scripts/s01.txt").string() + " --start-us 137000000");
  EXPECT_EQ(s.code, 0);
  EXPECT_EQ(s.out, read_text(source_path("fixtures/tasklist/logs/s01.log")));
}

}  // namespace
}  // namespace evseq
