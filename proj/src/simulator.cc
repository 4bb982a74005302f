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

#include "evseq/simulator.h"

#include <algorithm>
#include <sstream>

#include "evseq/error.h"

namespace evseq {

using nlohmann::json;

std::string_view to_string(LaunchMode m) { return m == LaunchMode::kClean ? "CLEAN" : "DIRTY"; }

std::optional<LaunchMode> parse_launch_mode(std::string_view s) {
  if (s == "CLEAN" || s == "clean") return LaunchMode::kClean;
  if (s == "DIRTY" || s == "dirty") return LaunchMode::kDirty;
  return std::nullopt;
}

std::vector<WindowLayer> GuiState::window_stack() const {
  std::vector<WindowLayer> stack{WindowLayer::kActivity};
  if (keyboard_shown) stack.push_back(WindowLayer::kKeyboard);
  if (dialog) stack.push_back(WindowLayer::kDialog);
  return stack;
}

std::string GuiState::key() const {
  std::string k = current_activity;
  k += keyboard_shown ? "|kb" : "|-";
  k += "|";
  k += dialog.value_or("-");
  for (const auto& [f, v] : flags) {
    k += "|" + f + "=" + std::to_string(v);
  }
  return k;
}

std::optional<ViewHierarchy::Located> ViewHierarchy::find(std::string_view id) const {
  std::optional<Located> found;
  for_each([&](const ViewNode& n, Window w) {
    if (!found && n.id == id) found = Located{&n, w};
  });
  return found;
}

void ViewHierarchy::for_each(const std::function<void(const ViewNode&, Window)>& fn) const {
  std::function<void(const ViewNode&, Window)> walk = [&](const ViewNode& n, Window w) {
    fn(n, w);
    for (const auto& c : n.children) walk(c, w);
  };
  for (const auto& win : windows) {
    for (const auto& r : win.roots) walk(r, win.event_window());
  }
}

namespace {

struct LayerRef {
  WindowLayer layer;
  const std::vector<ComponentNode>* roots;
  const ComponentNode* single;  // keyboard root
};

// Interactive windows, top-most first.
std::vector<LayerRef> interactive_layers(const AppModel& model, const GuiState& state) {
  std::vector<LayerRef> out;
  if (state.dialog) {
    out.push_back({WindowLayer::kDialog, &model.dialog(*state.dialog)->components, nullptr});
    return out;
  }
  if (state.keyboard_shown && model.keyboard) {
    out.push_back({WindowLayer::kKeyboard, nullptr, &*model.keyboard});
  }
  out.push_back({WindowLayer::kActivity, &model.activity(state.current_activity)->components,
                 nullptr});
  return out;
}

template <typename Fn>
void for_each_root(const LayerRef& layer, Fn&& fn) {
  if (layer.single) {
    fn(*layer.single);
  } else {
    for (const auto& n : *layer.roots) fn(n);
  }
}

bool visible(const ComponentNode& n, const GuiState& state) {
  for (const auto& c : n.visible_when) {
    auto it = state.flags.find(c.flag);
    if (!c.holds(it == state.flags.end() ? 0 : it->second)) return false;
  }
  return true;
}

ViewNode to_view(const AppModel& model, const GuiState& state, const ComponentNode& n) {
  ViewNode v{n.id, n.component_class, n.bounds, n.clickable, {}};
  if (!model.encapsulated.contains(n.id)) {
    for (const auto& c : n.children) {
      if (visible(c, state)) v.children.push_back(to_view(model, state, c));
    }
  }
  return v;
}

const ComponentNode* deepest(const AppModel& model, const GuiState& state, const ComponentNode& n,
                             Point p, bool through_encapsulation) {
  if (!visible(n, state) || !n.bounds.contains(p)) return nullptr;
  if (!through_encapsulation && model.encapsulated.contains(n.id)) return &n;
  for (const auto& c : n.children) {
    if (auto* hit = deepest(model, state, c, p, through_encapsulation)) return hit;
  }
  return &n;
}

std::optional<HitResult> locate(const AppModel& model, const GuiState& state, Point p,
                                bool through_encapsulation) {
  for (const auto& layer : interactive_layers(model, state)) {
    const ComponentNode* hit = nullptr;
    for_each_root(layer, [&](const ComponentNode& root) {
      if (!hit) hit = deepest(model, state, root, p, through_encapsulation);
    });
    if (hit) {
      const Window w = layer.layer == WindowLayer::kKeyboard ? Window::kKeyboard : Window::kActivity;
      return HitResult{hit->id, hit->component_class, w, hit->bounds};
    }
  }
  return std::nullopt;
}

bool guard_holds(const Transition& t, const GuiState& state) {
  for (const auto& c : t.guard) {
    auto it = state.flags.find(c.flag);
    if (!c.holds(it == state.flags.end() ? 0 : it->second)) return false;
  }
  return true;
}

void enter_activity(const AppModel& model, const std::string& name, StepResult& r) {
  r.state.current_activity = name;
  r.state.keyboard_shown = false;
  r.state.dialog.reset();
  r.activities_entered.push_back(name);
  for (const auto& b : model.activity(name)->on_enter) r.blocks_hit.push_back(b);
}

void open_dialog(const AppModel& model, const std::string& name, StepResult& r) {
  r.state.dialog = name;
  for (const auto& b : model.dialog(name)->on_show) r.blocks_hit.push_back(b);
}

}  // namespace

GuiState launch(const AppModel& model, LaunchMode mode) {
  StepResult r;
  r.state.launch_mode = mode;
  for (const auto& f : model.flags) {
    r.state.flags[f.name] = mode == LaunchMode::kClean ? f.clean : f.dirty;
  }
  enter_activity(model, model.initial_activity, r);
  if (mode == LaunchMode::kClean && model.clean_launch_dialog) {
    open_dialog(model, *model.clean_launch_dialog, r);
  }
  r.state.covered_blocks.insert(r.blocks_hit.begin(), r.blocks_hit.end());
  return r.state;
}

ViewHierarchy query_view_server(const AppModel& model, const GuiState& state) {
  ViewHierarchy h;
  for (const auto& layer : interactive_layers(model, state)) {
    ViewWindow w{layer.layer, {}};
    for_each_root(layer, [&](const ComponentNode& root) {
      if (visible(root, state)) w.roots.push_back(to_view(model, state, root));
    });
    h.windows.push_back(std::move(w));
  }
  return h;
}

std::optional<HitResult> hit_test(const AppModel& model, const GuiState& state, Point p) {
  return locate(model, state, p, false);
}

std::optional<HitResult> dispatch_target(const AppModel& model, const GuiState& state, Point p) {
  return locate(model, state, p, true);
}

std::optional<HitResult> find_input_target(const AppModel& model, const GuiState& state,
                                           std::string_view id) {
  std::function<const ComponentNode*(const ComponentNode&)> find =
      [&](const ComponentNode& n) -> const ComponentNode* {
    if (!visible(n, state)) return nullptr;
    if (n.id == id) return &n;
    for (const auto& c : n.children) {
      if (auto* f = find(c)) return f;
    }
    return nullptr;
  };
  for (const auto& layer : interactive_layers(model, state)) {
    const ComponentNode* hit = nullptr;
    for_each_root(layer, [&](const ComponentNode& root) {
      if (!hit) hit = find(root);
    });
    if (!hit) continue;
    auto target = dispatch_target(model, state, hit->bounds.center());
    if (target && target->component == id) return target;
    return std::nullopt;
  }
  return std::nullopt;
}

const Transition* matching_transition(const AppModel& model, const GuiState& state,
                                      std::string_view component, Action action) {
  for (const auto& t : model.transitions) {
    if (t.activity == state.current_activity && t.component == component && t.action == action &&
        guard_holds(t, state)) {
      return &t;
    }
  }
  return nullptr;
}

bool is_feasible(const AppModel& model, const GuiState& state, const GuiEvent& e) {
  if (e.activity != state.current_activity) return false;
  const ViewHierarchy view = query_view_server(model, state);
  auto found = view.find(e.component);
  if (!found || found->window != e.window) return false;
  if (found->node->component_class != e.component_class) return false;
  if (!matching_transition(model, state, e.component, e.action)) return false;
  auto target = dispatch_target(model, state, found->node->bounds.center());
  return target && target->component == e.component;
}

std::vector<GuiEvent> feasible_events(const AppModel& model, const GuiState& state) {
  std::vector<GuiEvent> out;
  const ViewHierarchy view = query_view_server(model, state);
  view.for_each([&](const ViewNode& n, Window w) {
    for (Action a : {Action::kClick, Action::kLongClick, Action::kSwipe}) {
      GuiEvent e{state.current_activity, w, n.id, a, n.component_class};
      if (is_feasible(model, state, e)) out.push_back(std::move(e));
    }
  });
  return out;
}

StepResult execute(const AppModel& model, const GuiState& state, const InputCommand& cmd) {
  const Rect screen = model.screen();
  if (!screen.contains(cmd.start) || (cmd.kind != CommandKind::kTap && !screen.contains(cmd.end))) {
    throw Error("input command outside the screen: " + format_command(cmd));
  }
  StepResult r;
  r.state = state;
  auto target = dispatch_target(model, state, cmd.start);
  if (!target) return r;
  const Transition* t = matching_transition(model, state, target->component, cmd.action());
  if (!t) return r;

  r.transition = t;
  r.event = GuiEvent{state.current_activity, target->window, target->component, cmd.action(),
                     target->component_class};
  auto clamp = [&](const std::string& flag, int v) {
    const FlagSpec* spec = model.flag(flag);
    return std::clamp(v, spec->min, spec->max);
  };
  for (const auto& [f, v] : t->set) r.state.flags[f] = clamp(f, v);
  for (const auto& [f, v] : t->add) r.state.flags[f] = clamp(f, r.state.flags[f] + v);
  for (const auto& f : t->toggle) r.state.flags[f] = clamp(f, r.state.flags[f] == 0 ? 1 : 0);
  for (const auto& b : t->blocks) r.blocks_hit.push_back(b);
  if (t->dismiss_dialog) r.state.dialog.reset();
  if (t->keyboard == KeyboardEffect::kShow) r.state.keyboard_shown = model.keyboard.has_value();
  if (t->keyboard == KeyboardEffect::kHide) r.state.keyboard_shown = false;
  if (t->target) enter_activity(model, *t->target, r);
  if (t->open_dialog) open_dialog(model, *t->open_dialog, r);
  r.state.covered_blocks.insert(r.blocks_hit.begin(), r.blocks_hit.end());
  return r;
}

std::set<std::string> Coverage::blocks() const {
  std::set<std::string> out;
  for (const auto& [b, hits] : block_hits) {
    if (hits > 0) out.insert(b);
  }
  return out;
}

std::string coverage_csv(const AppModel& model, const Coverage& coverage) {
  std::ostringstream os;
  os << "block,method,hits\n";
  for (const auto& [block, method] : model.block_methods()) {
    auto it = coverage.block_hits.find(block);
    os << block << ',' << method << ',' << (it == coverage.block_hits.end() ? 0 : it->second)
       << '\n';
  }
  return os.str();
}

json coverage_summary(const AppModel& model, const Coverage& coverage) {
  const auto all_blocks = model.blocks();
  const auto covered = coverage.blocks();
  json j;
  j["app"] = model.name;
  j["blocks_total"] = all_blocks.size();
  j["blocks_covered"] = covered.size();
  j["block_coverage_pct"] =
      all_blocks.empty() ? 0.0 : 100.0 * static_cast<double>(covered.size()) / all_blocks.size();
  j["activities_total"] = model.activities.size();
  j["activities_covered"] = coverage.activities.size();
  j["activity_coverage_pct"] =
      100.0 * static_cast<double>(coverage.activities.size()) / model.activities.size();
  j["activities"] = coverage.activities;
  return j;
}

Session::Session(const AppModel& model, LaunchMode mode)
    : model_(&model), state_(launch(model, mode)) {
  // Launch itself executes the initial activity (and dialog) blocks.
  std::vector<std::string> blocks(model.activity(model.initial_activity)->on_enter);
  if (mode == LaunchMode::kClean && model.clean_launch_dialog) {
    const auto& show = model.dialog(*model.clean_launch_dialog)->on_show;
    blocks.insert(blocks.end(), show.begin(), show.end());
  }
  record(blocks, {model.initial_activity});
}

void Session::record(const std::vector<std::string>& blocks,
                     const std::vector<std::string>& entered) {
  for (const auto& b : blocks) ++coverage_.block_hits[b];
  coverage_.activities.insert(entered.begin(), entered.end());
}

StepResult Session::execute(const InputCommand& cmd) {
  StepResult r = evseq::execute(*model_, state_, cmd);
  state_ = r.state;
  record(r.blocks_hit, r.activities_entered);
  return r;
}

SnapshotToken Session::snapshot() {
  snapshots_.push_back(state_);
  return SnapshotToken(snapshots_.size() - 1);
}

void Session::restore(SnapshotToken token) {
  if (token.id() >= snapshots_.size()) {
    throw Error("unknown snapshot token " + std::to_string(token.id()));
  }
  auto covered = std::move(state_.covered_blocks);
  state_ = snapshots_[token.id()];
  state_.covered_blocks = std::move(covered);
}

}  // namespace evseq
