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

#include "evseq/chimp.h"

#include <gtest/gtest.h>

#include "evseq/error.h"
#include "evseq/static_vocab.h"
#include "test_util.h"

namespace evseq {
namespace {

using testing::tasklist;
using testing::wordbook;

EventToken t(const std::string& s) { return EventToken(s); }

const EventToken kOk = t("MainActivity#ACTIVITY#dlg_ok#CLICK#Button");
const EventToken kAdd = t("MainActivity#ACTIVITY#btn_add#CLICK#Button");
const EventToken kCancel = t("AddTaskActivity#ACTIVITY#btn_cancel#CLICK#Button");
const EventToken kSettings = t("MainActivity#ACTIVITY#btn_settings#CLICK#ImageButton");

TEST(Command, BuiltFromBounds) {
  Rect r{20, 600, 200, 100};
  EXPECT_EQ(build_input_command(Action::kClick, r), InputCommand::tap({120, 650}));
  EXPECT_EQ(build_input_command(Action::kLongClick, r), InputCommand::long_tap({120, 650}, 600));
  EXPECT_EQ(build_input_command(Action::kSwipe, r),
            InputCommand::swipe({120, 650}, {120, 600}, 300));
  EXPECT_EQ(build_input_command(Action::kSwipe, Rect{0, 0, 40, 40}),
            InputCommand::swipe({20, 20}, {20, 0}, 300));
  EXPECT_EQ(build_input_command(Action::kSwipe, Rect{0, 0, 480, 800}),
            InputCommand::swipe({240, 400}, {240, 300}, 300));
  EXPECT_THROW(build_input_command(Action::kClick, Rect{0, 0, 0, 5}), Error);
}

TEST(Serial, SkipsExactlyTheInfeasibleEvents) {
  std::vector<EventToken> seq = {kAdd, kOk, kAdd, t("garbage"), kOk, kCancel, kSettings};
  Session session(tasklist(), LaunchMode::kClean);
  SerialResult r = validate_serial(seq, session, "test", 4);
  EXPECT_EQ(r.executed, (std::vector<std::size_t>{1, 2, 5, 6}));
  EXPECT_EQ(r.skipped, (std::vector<std::size_t>{0, 3, 4}));
  EXPECT_EQ(r.scenario.tokens(), (std::vector<EventToken>{kOk, kAdd, kCancel, kSettings}));
  EXPECT_EQ(r.scenario.origin, "test");
  EXPECT_EQ(r.scenario.seed, 4u);
  EXPECT_EQ(r.scenario.launch, LaunchMode::kClean);
  EXPECT_EQ(session.current_activity(), "SettingsActivity");
}

TEST(Serial, AgreesWithSimulatorGroundTruth) {
  // Every token of the static vocabulary, twice over, against a reference state.
  auto events = load_static_vocabulary(testing::source_path("fixtures/tasklist/static_vocab.json"));
  std::vector<EventToken> seq;
  for (int round = 0; round < 2; ++round) {
    for (const auto& e : events) seq.push_back(encode_token(e));
  }
  Session session(tasklist(), LaunchMode::kDirty);
  SerialResult r = validate_serial(seq, session);
  EXPECT_LE(r.scenario.steps.size(), seq.size());
  EXPECT_EQ(r.executed.size() + r.skipped.size(), seq.size());

  GuiState ref = launch(tasklist(), LaunchMode::kDirty);
  std::size_t next_exec = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    GuiEvent e = decode_token(seq[i]);
    const bool feasible = is_feasible(tasklist(), ref, e);
    const bool executed = next_exec < r.executed.size() && r.executed[next_exec] == i;
    EXPECT_EQ(feasible, executed) << i;
    if (executed) {
      ref = execute(tasklist(), ref, r.scenario.steps[next_exec].command).state;
      ++next_exec;
    }
  }
}

EventProposer constant(EventToken tok) {
  return [tok](std::span<const EventToken>, Rng&) { return tok; };
}

TEST(Interactive, EmitsKFeasibleSteps) {
  Session session(tasklist(), LaunchMode::kClean);
  Rng rng(1);
  InteractiveResult r = validate_interactive(50, constant(kAdd), session, rng);
  EXPECT_FALSE(r.aborted);
  ASSERT_EQ(r.scenario.steps.size(), 50u);
  // The first proposal is blocked by the dialog.
  EXPECT_EQ(r.scenario.steps[0].event.component, "dlg_ok");
  EXPECT_GE(r.fallbacks, 1u);
  ReplayResult rep = replay_scenario(r.scenario, tasklist());
  EXPECT_TRUE(rep.actionable);
  EXPECT_EQ(rep.steps_replayed, 50u);
  EXPECT_EQ(rep.coverage.block_hits, session.coverage().block_hits);
  EXPECT_EQ(rep.final_state.key(), session.state().key());
}

TEST(Interactive, GarbageProposalsAlwaysFallBack) {
  Session session(wordbook(), LaunchMode::kClean);
  Rng rng(2);
  InteractiveResult r = validate_interactive(20, constant(t("nonsense")), session, rng);
  EXPECT_EQ(r.fallbacks, 20u);
  EXPECT_EQ(r.scenario.steps.size(), 20u);
}

TEST(Interactive, HistoryModes) {
  Session full(tasklist(), LaunchMode::kDirty);
  Rng rng(3);
  std::vector<std::size_t> seen;
  auto recorder = [&](std::span<const EventToken> h, Rng&) {
    seen.push_back(h.size());
    return kSettings;
  };
  validate_interactive(5, recorder, full, rng, HistoryMode::kFull);
  EXPECT_EQ(seen, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  seen.clear();
  Session last(tasklist(), LaunchMode::kDirty);
  validate_interactive(5, recorder, last, rng, HistoryMode::kLastOne);
  EXPECT_EQ(seen, (std::vector<std::size_t>{0, 1, 1, 1, 1}));
}

TEST(Interactive, AbortsInADeadEnd) {
  static const AppModel dead = parse_app_model(nlohmann::json::parse(R"({
    "name": "dead", "screen": {"width": 100, "height": 100}, "initial_activity": "A",
    "flags": [{"name": "gone", "min": 0, "max": 1}],
    "methods": {"m": ["b"]},
    "activities": [{"name": "A", "components": [
      {"id": "once", "class": "Button", "bounds": [0, 0, 100, 100],
       "visible_when": [{"flag": "gone", "op": "==", "value": 0}]}]}],
    "transitions": [{"activity": "A", "component": "once", "action": "CLICK",
                     "set": {"gone": 1}, "blocks": ["b"]}]
  })"));
  Session session(dead, LaunchMode::kClean);
  Rng rng(0);
  InteractiveResult r = validate_interactive(10, constant(t("x")), session, rng);
  EXPECT_TRUE(r.aborted);
  EXPECT_EQ(r.scenario.steps.size(), 1u);
}

TEST(Interactive, ModelProposerBreaksContextAtUnknownTokens) {
  Vocabulary v;
  v.add(kAdd, Provenance::kMined);
  v.add(kCancel, Provenance::kMined);
  std::vector<EventSequence> corpus = {{{kAdd, kCancel, kAdd, kCancel}, "s"}};
  ModelPair m = train(corpus, v, 2);
  EventProposer p = model_proposer(m.backoff, FlavorConfig::up());
  Rng rng(0);
  std::vector<EventToken> h = {kAdd, kOk};
  // kOk is outside the vocabulary, so the proposal starts from an empty context.
  for (int i = 0; i < 20; ++i) EXPECT_EQ(p(h, rng), kAdd);
  h = {kOk, kAdd};
  for (int i = 0; i < 20; ++i) EXPECT_EQ(p(h, rng), kCancel);
}

TEST(Replay, DetectsDivergence) {
  Session session(tasklist(), LaunchMode::kDirty);
  SerialResult r = validate_serial(std::vector<EventToken>{kAdd, kCancel, kSettings}, session);
  ActionableScenario s = r.scenario;
  EXPECT_TRUE(replay_scenario(s, tasklist()).actionable);
  s.launch = LaunchMode::kClean;  // the welcome dialog now swallows the first tap
  ReplayResult bad = replay_scenario(s, tasklist());
  EXPECT_FALSE(bad.actionable);
  EXPECT_EQ(bad.steps_replayed, 0u);
}

TEST(ScenarioText, RoundTrip) {
  Session session(tasklist(), LaunchMode::kClean);
  Rng rng(9);
  ActionableScenario s = validate_interactive(12, constant(kAdd), session, rng).scenario;
  s.origin = "I-LM";
  s.seed = 77;
  const std::string text = format_scenario(s);
  EXPECT_TRUE(text.starts_with("# scenario origin=I-LM seed=77 launch=CLEAN steps=12\n"));
  EXPECT_NE(text.find("1\tMainActivity#ACTIVITY#dlg_ok#CLICK#Button\ttap 240 460\n"),
            std::string::npos);
  ActionableScenario back = parse_scenario(text);
  EXPECT_EQ(back.steps, s.steps);
  EXPECT_EQ(back.origin, s.origin);
  EXPECT_EQ(back.seed, s.seed);
  EXPECT_EQ(back.launch, s.launch);
  EXPECT_EQ(format_scenario(back), text);
}

TEST(ScenarioText, Errors) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_scenario(text);
    } catch (const ParseError& e) {
      return e.line() == 0 ? 999 : e.line();
    }
    return 0;
  };
  const std::string head = "# scenario origin=x seed=1 launch=DIRTY steps=1\n";
  const std::string step = "1\tMainActivity#ACTIVITY#btn_add#CLICK#Button\ttap 120 650\n";
  EXPECT_EQ(line_of(head + step), 0u);
  EXPECT_EQ(line_of(""), 1u);
  EXPECT_EQ(line_of(step), 1u);
  EXPECT_EQ(line_of("# scenario seed=z steps=0\n"), 1u);
  EXPECT_EQ(line_of("# scenario launch=WARM steps=0\n"), 1u);
  EXPECT_EQ(line_of("# scenario color=red\n"), 1u);
  EXPECT_EQ(line_of(head + "2" + step.substr(1)), 2u);
  EXPECT_EQ(line_of(head + "1\tjunk\ttap 1 2\n"), 2u);
  EXPECT_EQ(line_of(head + "1\tMainActivity#ACTIVITY#btn_add#CLICK#Button\tpoke\n"), 2u);
  EXPECT_EQ(line_of(head + "1\tMainActivity#ACTIVITY#btn_add#CLICK#Button\n"), 2u);
  EXPECT_NE(line_of(head), 0u);
}

}  // namespace
}  // namespace evseq
