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

#include "evseq/chimp.h"

namespace evseq {
namespace {

struct Target {
  std::string id;
  Rect bounds;
};

class Dfs {
 public:
  Dfs(Session& session, const DfsOptions& options, DfsResult& out)
      : session_(session), options_(options), out_(out) {}

  void explore() {
    std::string key = session_.state().key();
    if (!out_.visited_states.insert(key).second) return;

    std::vector<Target> targets;
    session_.view().for_each([&](const ViewNode& node, Window) {
      if (node.clickable && !node.bounds.empty()) targets.push_back({node.id, node.bounds});
    });
    std::vector<Action> actions = {Action::kClick};
    if (options_.long_clicks) actions.push_back(Action::kLongClick);
    if (options_.swipes) actions.push_back(Action::kSwipe);

    SnapshotToken here = session_.snapshot();
    for (const Target& t : targets) {
      for (Action a : actions) {
        session_.restore(here);
        InputCommand cmd = build_input_command(a, t.bounds);
        out_.attempts.push_back({key, t.id, a});
        out_.commands.push_back(cmd);
        StepResult r = session_.execute(cmd);
        if (r.event) {
          out_.events.push_back(*r.event);
          explore();
        }
      }
    }
    session_.restore(here);
  }

 private:
  Session& session_;
  const DfsOptions& options_;
  DfsResult& out_;
};

}  // namespace

ExplorationResult run_monkey(Session& session, std::size_t n_events, Rng& rng) {
  ExplorationResult out;
  const AppModel& m = session.model();
  for (std::size_t i = 0; i < n_events; ++i) {
    int x = static_cast<int>(rng.below(static_cast<std::uint64_t>(m.screen_width)));
    int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(m.screen_height)));
    InputCommand cmd = InputCommand::tap({x, y});
    out.commands.push_back(cmd);
    StepResult r = session.execute(cmd);
    if (r.event) out.events.push_back(*r.event);
  }
  out.coverage = session.coverage();
  return out;
}

DfsResult run_dfs(Session& session, const DfsOptions& options) {
  DfsResult out;
  Dfs(session, options, out).explore();
  out.coverage = session.coverage();
  return out;
}

}  // namespace evseq
