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

#include "evseq/baselines.h"

#include <gtest/gtest.h>

#include <deque>

#include "evseq/chimp.h"
#include "test_util.h"

namespace evseq {
namespace {

using testing::tasklist;
using testing::wordbook;

TEST(Monkey, IssuesExactlyNTapsOnScreen) {
  Session session(tasklist(), LaunchMode::kDirty);
  Rng rng(5);
  ExplorationResult r = run_monkey(session, 300, rng);
  ASSERT_EQ(r.commands.size(), 300u);
  for (const auto& c : r.commands) {
    EXPECT_EQ(c.kind, CommandKind::kTap);
    EXPECT_TRUE(tasklist().screen().contains(c.start));
  }
  EXPECT_LE(r.events.size(), 300u);
  EXPECT_EQ(r.coverage.block_hits, session.coverage().block_hits);
}

TEST(Monkey, Deterministic) {
  Session a(tasklist(), LaunchMode::kClean), b(tasklist(), LaunchMode::kClean);
  Rng ra(12), rb(12);
  EXPECT_EQ(run_monkey(a, 100, ra).commands, run_monkey(b, 100, rb).commands);
  EXPECT_EQ(a.state(), b.state());
}

TEST(Monkey, FullScreenButtonAlwaysFires) {
  static const AppModel full = parse_app_model(nlohmann::json::parse(R"({
    "name": "full", "screen": {"width": 50, "height": 30}, "initial_activity": "A",
    "methods": {"m": ["hit"]},
    "activities": [{"name": "A", "components": [
      {"id": "all", "class": "Button", "bounds": [0, 0, 50, 30]}]}],
    "transitions": [{"activity": "A", "component": "all", "action": "CLICK", "blocks": ["hit"]}]
  })"));
  Session session(full, LaunchMode::kClean);
  Rng rng(0);
  ExplorationResult r = run_monkey(session, 40, rng);
  EXPECT_EQ(r.events.size(), 40u);
  EXPECT_EQ(r.coverage.block_hits.at("hit"), 40u);
}

// Breadth-first enumeration of the states reachable by clicking the
// queried hierarchy's clickable components at their centers.
std::set<std::string> reachable_states(const AppModel& m, LaunchMode mode) {
  std::set<std::string> seen;
  std::deque<GuiState> queue{launch(m, mode)};
  seen.insert(queue.front().key());
  while (!queue.empty()) {
    GuiState s = queue.front();
    queue.pop_front();
    query_view_server(m, s).for_each([&](const ViewNode& n, Window) {
      if (!n.clickable) return;
      StepResult r = execute(m, s, InputCommand::tap(n.bounds.center()));
      if (r.event && seen.insert(r.state.key()).second) queue.push_back(r.state);
    });
  }
  return seen;
}

TEST(Dfs, VisitsEveryReachableState) {
  for (const AppModel* m : {&tasklist(), &wordbook()}) {
    for (LaunchMode mode : {LaunchMode::kClean, LaunchMode::kDirty}) {
      Session session(*m, mode);
      DfsResult r = run_dfs(session);
      EXPECT_EQ(r.visited_states, reachable_states(*m, mode)) << m->name;
      std::set<DfsResult::Attempt> unique(r.attempts.begin(), r.attempts.end());
      EXPECT_EQ(unique.size(), r.attempts.size());
      EXPECT_EQ(r.commands.size(), r.attempts.size());
      EXPECT_EQ(session.state().key(), launch(*m, mode).key());
    }
  }
}

TEST(Dfs, NeverTouchesEncapsulatedKeys) {
  Session session(tasklist(), LaunchMode::kDirty);
  DfsResult r = run_dfs(session);
  bool reached_keyboard = false;
  for (const auto& a : r.attempts) {
    EXPECT_FALSE(a.component.starts_with("key_")) << a.component;
    reached_keyboard = reached_keyboard || a.component == "keyboard";
  }
  EXPECT_TRUE(reached_keyboard);
  for (const auto& e : r.events) EXPECT_FALSE(e.component.starts_with("key_"));
  // Saving needs typed text, which only the keys provide.
  EXPECT_FALSE(r.coverage.blocks().contains("add.save"));
  EXPECT_FALSE(r.coverage.blocks().contains("kb.type"));
  EXPECT_TRUE(r.coverage.blocks().contains("add.emptyTitle"));
}

TEST(Dfs, ExtraGestures) {
  Session plain(tasklist(), LaunchMode::kDirty), rich(tasklist(), LaunchMode::kDirty);
  DfsResult a = run_dfs(plain);
  DfsResult b = run_dfs(rich, DfsOptions{true, true});
  EXPECT_GT(b.coverage.blocks().size(), a.coverage.blocks().size());
  EXPECT_TRUE(b.coverage.blocks().contains("main.longPress"));
  EXPECT_FALSE(a.coverage.blocks().contains("main.longPress"));
}

}  // namespace
}  // namespace evseq
