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

// Declarative model of a simulated application.
//
// App-model files are JSON objects:
//
//   {
//     "name": "tasklist",
//     "screen": {"width": 480, "height": 800},
//     "initial_activity": "MainActivity",
//     "flags": [{"name": "task_count", "clean": 0, "dirty": 2, "min": 0, "max": 9}],
//     "methods": {"MainActivity.onCreate": ["main.create"]},
//     "activities": [{"name": "MainActivity", "on_enter": ["main.create"],
//                     "components": [<node>, ...]}],
//     "keyboard": <node>,
//     "dialogs": [{"name": "welcome", "on_show": [...], "components": [<node>]}],
//     "clean_launch_dialog": "welcome",
//     "encapsulated": ["keyboard"],
//     "transitions": [<transition>, ...]
//   }
//
// <node>: {"id", "class", "bounds": [x, y, w, h], "children": [...],
//          "visible_when": [<condition>], "clickable": bool}
// <condition>: {"flag": "task_count", "op": ">", "value": 0}
// <transition>: {"activity", "component", "action", "guard": [<condition>],
//                "target": activity, "keyboard": "show" | "hide",
//                "open_dialog": name, "dismiss_dialog": bool,
//                "set": {flag: int}, "add": {flag: int}, "toggle": [flag],
//                "blocks": [block id]}
//
// Blocks are the unit of coverage; every block belongs to exactly one
// method. "clickable" defaults to false for *Layout and TextView classes.

#ifndef EVSEQ_APP_MODEL_H_
#define EVSEQ_APP_MODEL_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "evseq/event.h"
#include "evseq/gui.h"

namespace evseq {

struct Condition {
  enum class Op { kEq, kNe, kLt, kLe, kGt, kGe };
  std::string flag;
  Op op = Op::kEq;
  int value = 0;

  bool holds(int flag_value) const;
};

struct ComponentNode {
  std::string id;
  std::string component_class;
  Rect bounds;
  std::vector<ComponentNode> children;
  std::vector<Condition> visible_when;
  bool clickable = true;
};

struct FlagSpec {
  std::string name;
  int clean = 0;
  int dirty = 0;
  int min = 0;
  int max = 1;
};

struct DialogSpec {
  std::string name;
  std::vector<ComponentNode> components;
  std::vector<std::string> on_show;
};

struct ActivitySpec {
  std::string name;
  std::vector<ComponentNode> components;
  std::vector<std::string> on_enter;
};

enum class KeyboardEffect { kNone, kShow, kHide };

struct Transition {
  std::string activity;
  std::string component;
  Action action = Action::kClick;
  std::vector<Condition> guard;
  std::optional<std::string> target;
  KeyboardEffect keyboard = KeyboardEffect::kNone;
  std::optional<std::string> open_dialog;
  bool dismiss_dialog = false;
  std::map<std::string, int> set;
  std::map<std::string, int> add;
  std::vector<std::string> toggle;
  std::vector<std::string> blocks;
  // Position in the model file; the first matching transition fires.
  std::size_t index = 0;
};

struct AppModel {
  std::string name;
  int screen_width = 0;
  int screen_height = 0;
  std::string initial_activity;
  std::vector<FlagSpec> flags;
  std::map<std::string, std::vector<std::string>> methods;
  std::vector<ActivitySpec> activities;
  std::optional<ComponentNode> keyboard;
  std::vector<DialogSpec> dialogs;
  std::optional<std::string> clean_launch_dialog;
  std::set<std::string> encapsulated;
  std::vector<Transition> transitions;

  Rect screen() const { return {0, 0, screen_width, screen_height}; }
  const ActivitySpec* activity(std::string_view name) const;
  const DialogSpec* dialog(std::string_view name) const;
  const FlagSpec* flag(std::string_view name) const;
  // Every block id, sorted.
  std::vector<std::string> blocks() const;
  // block id -> method name.
  std::map<std::string, std::string> block_methods() const;
  std::vector<std::string> activity_names() const;
};

// Parses and validates. Throws ParseError on malformed JSON and ModelError
// on dangling references, duplicate ids, children outside their parent,
// components outside the screen, or a transition-bearing component whose
// center lies on one of its descendants.
AppModel parse_app_model(const nlohmann::json& doc);
AppModel load_app_model(const std::filesystem::path& file);

}  // namespace evseq

#endif  // EVSEQ_APP_MODEL_H_
