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

// Turning generated event sequences into actionable scenarios against a
// running app: serial validation (skip what is infeasible) and interactive
// validation (ask for one event at a time, fall back to a random feasible
// event when the proposal cannot be executed).

#ifndef EVSEQ_CHIMP_H_
#define EVSEQ_CHIMP_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evseq/event.h"
#include "evseq/flavor.h"
#include "evseq/gui.h"
#include "evseq/ngram.h"
#include "evseq/rng.h"
#include "evseq/simulator.h"

namespace evseq {

struct ScenarioStep {
  GuiEvent event;
  InputCommand command;
  bool operator==(const ScenarioStep&) const = default;
};

struct ActionableScenario {
  std::vector<ScenarioStep> steps;
  std::string origin;
  std::uint64_t seed = 0;
  LaunchMode launch = LaunchMode::kClean;

  std::vector<EventToken> tokens() const;
};

// CLICK: tap at the center. LONG_CLICK: zero-displacement 600 ms swipe at
// the center. SWIPE: 300 ms swipe from the center up by min(height / 2, 100).
// Throws Error for zero-area bounds.
InputCommand build_input_command(Action action, const Rect& bounds);

struct SerialResult {
  ActionableScenario scenario;
  // Indices into the input sequence.
  std::vector<std::size_t> executed;
  std::vector<std::size_t> skipped;
};

SerialResult validate_serial(std::span<const EventToken> sequence, Session& session,
                             std::string origin = "serial", std::uint64_t seed = 0);

enum class HistoryMode {
  kFull,     // every executed event; the generator slices to order-1
  kLastOne,  // only the last executed event
};

// Proposes the next event given the executed history.
using EventProposer = std::function<EventToken(std::span<const EventToken>, Rng&)>;

// Samples one event from `model` with `flavor`. History tokens outside the
// model vocabulary break the context: only events after the last such
// token condition the proposal.
EventProposer model_proposer(const LanguageModel& model, const FlavorConfig& flavor);

struct InteractiveResult {
  ActionableScenario scenario;
  std::size_t fallbacks = 0;
  // True when a state offered no feasible event before k steps.
  bool aborted = false;
};

InteractiveResult validate_interactive(int k, const EventProposer& propose, Session& session,
                                       Rng& rng, HistoryMode history = HistoryMode::kFull,
                                       std::string origin = "interactive", std::uint64_t seed = 0);

struct ReplayResult {
  // Every command fired the recorded event's transition.
  bool actionable = true;
  std::size_t steps_replayed = 0;
  Coverage coverage;
  GuiState final_state;
};

ReplayResult replay_scenario(const ActionableScenario& scenario, const AppModel& model);

// Text form:
//   # scenario origin=<label> seed=<n> launch=<CLEAN|DIRTY> steps=<n>
//   1<TAB><token><TAB><command>
std::string format_scenario(const ActionableScenario& scenario);
ActionableScenario parse_scenario(std::string_view text);

}  // namespace evseq

#endif  // EVSEQ_CHIMP_H_
