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

// Deterministic execution of an AppModel: runtime state, a view-server
// style hierarchy query, hit testing, feasibility, input execution, and
// block/activity coverage.
//
// Window stacking: a modal dialog, when open, is the only window that
// receives input or appears in the hierarchy. Otherwise the keyboard (when
// shown) sits above the activity window. Input reaches the deepest visible
// component under the point, including children of encapsulated components;
// the hierarchy query hides those children.

#ifndef EVSEQ_SIMULATOR_H_
#define EVSEQ_SIMULATOR_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "evseq/app_model.h"
#include "evseq/event.h"
#include "evseq/gui.h"

namespace evseq {

enum class LaunchMode { kClean, kDirty };
std::string_view to_string(LaunchMode m);
std::optional<LaunchMode> parse_launch_mode(std::string_view s);

enum class WindowLayer { kActivity, kKeyboard, kDialog };

struct GuiState {
  std::string current_activity;
  bool keyboard_shown = false;
  std::optional<std::string> dialog;
  std::map<std::string, int> flags;
  std::set<std::string> covered_blocks;
  LaunchMode launch_mode = LaunchMode::kClean;

  // Bottom to top; never empty.
  std::vector<WindowLayer> window_stack() const;
  // Identifies the GUI state up to coverage: activity, windows, flags.
  std::string key() const;

  bool operator==(const GuiState&) const = default;
};

struct ViewNode {
  std::string id;
  std::string component_class;
  Rect bounds;
  bool clickable = true;
  std::vector<ViewNode> children;
};

struct ViewWindow {
  WindowLayer layer = WindowLayer::kActivity;
  std::vector<ViewNode> roots;

  Window event_window() const {
    return layer == WindowLayer::kKeyboard ? Window::kKeyboard : Window::kActivity;
  }
};

struct ViewHierarchy {
  // Top-most window first.
  std::vector<ViewWindow> windows;

  struct Located {
    const ViewNode* node = nullptr;
    Window window = Window::kActivity;
  };
  std::optional<Located> find(std::string_view id) const;
  // Pre-order walk over every node, top-most window first.
  void for_each(const std::function<void(const ViewNode&, Window)>& fn) const;
};

GuiState launch(const AppModel& model, LaunchMode mode);

ViewHierarchy query_view_server(const AppModel& model, const GuiState& state);

// Deepest component of the queryable hierarchy containing p.
std::optional<HitResult> hit_test(const AppModel& model, const GuiState& state, Point p);
// The component that actually receives input at p.
std::optional<HitResult> dispatch_target(const AppModel& model, const GuiState& state, Point p);

// Finds `id` in the windows that receive input, descending into
// encapsulated components. Null when the component is hidden or input at
// its center lands elsewhere.
std::optional<HitResult> find_input_target(const AppModel& model, const GuiState& state,
                                           std::string_view id);

// First transition (file order) for the component/action in the current
// activity whose guard holds, or null.
const Transition* matching_transition(const AppModel& model, const GuiState& state,
                                      std::string_view component, Action action);

// True iff the event's activity is current, its component is visible in
// the hierarchy under the event's window with the event's class, a
// transition with a satisfied guard exists, and a command aimed at the
// component's center reaches it.
bool is_feasible(const AppModel& model, const GuiState& state, const GuiEvent& event);

// Every feasible (component, action) event of the current state, in
// hierarchy order then CLICK, LONG_CLICK, SWIPE.
std::vector<GuiEvent> feasible_events(const AppModel& model, const GuiState& state);

struct StepResult {
  GuiState state;
  const Transition* transition = nullptr;  // null for a no-op
  std::optional<GuiEvent> event;           // set iff a transition fired
  std::vector<std::string> blocks_hit;     // in execution order
  std::vector<std::string> activities_entered;
};

// Applies one command. Throws Error if the command leaves the screen.
StepResult execute(const AppModel& model, const GuiState& state, const InputCommand& cmd);

struct Coverage {
  std::map<std::string, std::uint64_t> block_hits;
  std::set<std::string> activities;

  std::set<std::string> blocks() const;
};

// "block,method,hits" rows for every block of the model, sorted by block id.
std::string coverage_csv(const AppModel& model, const Coverage& coverage);
nlohmann::json coverage_summary(const AppModel& model, const Coverage& coverage);

class SnapshotToken {
 public:
  explicit SnapshotToken(std::uint64_t id = UINT64_MAX) : id_(id) {}
  std::uint64_t id() const { return id_; }

 private:
  std::uint64_t id_;
};

// One running instance of an app. Coverage accumulates over the session's
// lifetime and is not rolled back by restore().
class Session : public GuiOracle, public Replayer {
 public:
  Session(const AppModel& model, LaunchMode mode);

  const AppModel& model() const { return *model_; }
  const GuiState& state() const { return state_; }
  const Coverage& coverage() const { return coverage_; }

  StepResult execute(const InputCommand& cmd);
  bool is_feasible(const GuiEvent& e) const { return evseq::is_feasible(*model_, state_, e); }
  std::vector<GuiEvent> feasible_events() const { return evseq::feasible_events(*model_, state_); }
  ViewHierarchy view() const { return query_view_server(*model_, state_); }

  SnapshotToken snapshot();
  // Throws Error for a token this session did not issue.
  void restore(SnapshotToken token);

  std::string current_activity() const override { return state_.current_activity; }
  bool keyboard_shown() const override { return state_.keyboard_shown; }
  std::optional<HitResult> hit_test(Point p) const override {
    return evseq::hit_test(*model_, state_, p);
  }
  void replay(const InputCommand& cmd) override { execute(cmd); }

 private:
  void record(const std::vector<std::string>& blocks, const std::vector<std::string>& entered);

  const AppModel* model_;
  GuiState state_;
  Coverage coverage_;
  std::vector<GuiState> snapshots_;
};

}  // namespace evseq

#endif  // EVSEQ_SIMULATOR_H_
