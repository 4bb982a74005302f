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

// Baseline explorers: a random tapper and a depth-first ripper.

#ifndef EVSEQ_BASELINES_H_
#define EVSEQ_BASELINES_H_

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "evseq/event.h"
#include "evseq/gui.h"
#include "evseq/rng.h"
#include "evseq/simulator.h"

namespace evseq {

struct ExplorationResult {
  // Every command issued, in order.
  std::vector<InputCommand> commands;
  // Events whose transitions fired, in order.
  std::vector<GuiEvent> events;
  Coverage coverage;
};

// Issues exactly n_events taps at uniform integer screen positions.
ExplorationResult run_monkey(Session& session, std::size_t n_events, Rng& rng);

struct DfsOptions {
  bool long_clicks = false;
  bool swipes = false;
};

struct DfsResult : ExplorationResult {
  // (state key, component id, action) for every attempted input.
  struct Attempt {
    std::string state;
    std::string component;
    Action action = Action::kClick;
    auto operator<=>(const Attempt&) const = default;
  };
  std::vector<Attempt> attempts;
  std::set<std::string> visited_states;
};

// Depth-first exploration. In every newly visited state, each clickable
// component of the queried hierarchy is tried once from a snapshot of that
// state; the session is restored before each attempt.
DfsResult run_dfs(Session& session, const DfsOptions& options = {});

}  // namespace evseq

#endif  // EVSEQ_BASELINES_H_
