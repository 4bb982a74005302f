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

#include "evseq/static_vocab.h"

#include <fstream>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "evseq/error.h"

namespace evseq {

using nlohmann::json;

const GestureTable& default_gesture_table() {
  static const GestureTable table = {
      {"Button", {Action::kClick, Action::kLongClick}},
      {"ImageButton", {Action::kClick, Action::kLongClick}},
      {"MenuItem", {Action::kClick, Action::kLongClick}},
      {"ListView", {Action::kClick, Action::kLongClick, Action::kSwipe}},
      {"ScrollView", {Action::kClick, Action::kLongClick, Action::kSwipe}},
      {"EditText", {Action::kClick}},
      {"CheckBox", {Action::kClick}},
      {"RadioButton", {Action::kClick}},
      {"Spinner", {Action::kClick}},
      {"KeyboardView", {Action::kClick}},
  };
  return table;
}

std::vector<StaticComponentDecl> parse_static_declarations(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("static vocabulary: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("static vocabulary: top level must be an array");

  std::vector<StaticComponentDecl> decls;
  std::set<std::tuple<std::string, Window, std::string>> seen;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& item = doc[i];
    auto where = "static vocabulary entry " + std::to_string(i) + ": ";
    if (!item.is_object()) throw ParseError(where + "expected an object");
    StaticComponentDecl d;
    try {
      d.activity = item.at("activity").get<std::string>();
      d.component = item.at("component").get<std::string>();
      d.component_class = item.at("class").get<std::string>();
      if (item.contains("window")) {
        auto w = parse_window(item["window"].get<std::string>());
        if (!w) throw ParseError(where + "unknown window");
        d.window = *w;
      }
      if (item.contains("extra_actions")) {
        std::vector<Action> actions;
        for (const auto& a : item["extra_actions"]) {
          auto parsed = parse_action(a.get<std::string>());
          if (!parsed) throw ParseError(where + "unknown action '" + a.get<std::string>() + "'");
          actions.push_back(*parsed);
        }
        d.extra_actions = std::move(actions);
      }
    } catch (const json::exception& e) {
      throw ParseError(where + e.what());
    }
    if (!seen.emplace(d.activity, d.window, d.component).second) {
      throw ParseError(where + "duplicate declaration of " + d.activity + "/" + d.component);
    }
    decls.push_back(std::move(d));
  }
  return decls;
}

std::set<GuiEvent> static_events(const std::vector<StaticComponentDecl>& decls,
                                 const GestureTable& table) {
  std::set<GuiEvent> events;
  for (const auto& d : decls) {
    std::vector<Action> actions;
    if (d.extra_actions) {
      actions = *d.extra_actions;
    } else if (auto it = table.find(d.component_class); it != table.end()) {
      actions = it->second;
    } else {
      throw ModelError("no inherent gestures for class '" + d.component_class + "' (" +
                       d.activity + "/" + d.component + "); declare extra_actions");
    }
    for (Action a : actions) {
      GuiEvent e{d.activity, d.window, d.component, a, d.component_class};
      encode_token(e);
      events.insert(std::move(e));
    }
  }
  return events;
}

std::set<GuiEvent> load_static_vocabulary(const std::filesystem::path& file,
                                          const GestureTable& table) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open static vocabulary " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return static_events(parse_static_declarations(buf.str()), table);
}

Vocabulary merge_vocabulary(const Vocabulary& mined, const std::set<GuiEvent>& static_events) {
  Vocabulary out = mined;
  for (const auto& e : static_events) out.add(encode_token(e), Provenance::kStatic);
  return out;
}

}  // namespace evseq
