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

// Static vocabulary: feasible events declared per activity, standing in
// for events extracted from an application's source and resources.
//
// File format: a JSON array of declarations
//
//   [{"activity": "MainActivity", "component": "btn_ok",
//     "class": "Button", "window": "ACTIVITY"},
//    {"activity": "MainActivity", "component": "canvas",
//     "class": "SketchView", "extra_actions": ["SWIPE"]}]
//
// "window" defaults to ACTIVITY. Standard classes get their inherent
// gestures; any other class must list "extra_actions".

#ifndef EVSEQ_STATIC_VOCAB_H_
#define EVSEQ_STATIC_VOCAB_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "evseq/event.h"

namespace evseq {

struct StaticComponentDecl {
  std::string activity;
  std::string component;
  std::string component_class;
  Window window = Window::kActivity;
  std::optional<std::vector<Action>> extra_actions;
};

// Class name -> gestures that class inherently supports.
using GestureTable = std::map<std::string, std::vector<Action>, std::less<>>;

const GestureTable& default_gesture_table();

std::vector<StaticComponentDecl> parse_static_declarations(std::string_view json_text);

std::set<GuiEvent> static_events(const std::vector<StaticComponentDecl>& decls,
                                 const GestureTable& table = default_gesture_table());

std::set<GuiEvent> load_static_vocabulary(const std::filesystem::path& file,
                                          const GestureTable& table = default_gesture_table());

Vocabulary merge_vocabulary(const Vocabulary& mined, const std::set<GuiEvent>& static_events);

}  // namespace evseq

#endif  // EVSEQ_STATIC_VOCAB_H_
