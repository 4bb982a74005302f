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

#include "evseq/app_model.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "evseq/error.h"

namespace evseq {

using nlohmann::json;

bool Condition::holds(int v) const {
  switch (op) {
    case Op::kEq:
      return v == value;
    case Op::kNe:
      return v != value;
    case Op::kLt:
      return v < value;
    case Op::kLe:
      return v <= value;
    case Op::kGt:
      return v > value;
    case Op::kGe:
      return v >= value;
  }
  return false;
}

const ActivitySpec* AppModel::activity(std::string_view n) const {
  for (const auto& a : activities) {
    if (a.name == n) return &a;
  }
  return nullptr;
}

const DialogSpec* AppModel::dialog(std::string_view n) const {
  for (const auto& d : dialogs) {
    if (d.name == n) return &d;
  }
  return nullptr;
}

const FlagSpec* AppModel::flag(std::string_view n) const {
  for (const auto& f : flags) {
    if (f.name == n) return &f;
  }
  return nullptr;
}

std::vector<std::string> AppModel::blocks() const {
  std::vector<std::string> out;
  for (const auto& [_, blocks] : methods) out.insert(out.end(), blocks.begin(), blocks.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::map<std::string, std::string> AppModel::block_methods() const {
  std::map<std::string, std::string> out;
  for (const auto& [method, blocks] : methods) {
    for (const auto& b : blocks) out.emplace(b, method);
  }
  return out;
}

std::vector<std::string> AppModel::activity_names() const {
  std::vector<std::string> out;
  for (const auto& a : activities) out.push_back(a.name);
  return out;
}

namespace {

Condition::Op parse_op(const std::string& s) {
  if (s == "==") return Condition::Op::kEq;
  if (s == "!=") return Condition::Op::kNe;
  if (s == "<") return Condition::Op::kLt;
  if (s == "<=") return Condition::Op::kLe;
  if (s == ">") return Condition::Op::kGt;
  if (s == ">=") return Condition::Op::kGe;
  throw ParseError("unknown condition operator '" + s + "'");
}

std::vector<Condition> parse_conditions(const json& j) {
  std::vector<Condition> out;
  for (const auto& c : j) {
    out.push_back({c.at("flag").get<std::string>(), parse_op(c.value("op", "==")),
                   c.at("value").get<int>()});
  }
  return out;
}

bool default_clickable(std::string_view cls) {
  return !(cls == "TextView" || cls.ends_with("Layout"));
}

ComponentNode parse_node(const json& j) {
  ComponentNode n;
  n.id = j.at("id").get<std::string>();
  n.component_class = j.at("class").get<std::string>();
  const auto b = j.at("bounds").get<std::vector<int>>();
  if (b.size() != 4) throw ParseError("bounds of '" + n.id + "' must be [x, y, w, h]");
  n.bounds = {b[0], b[1], b[2], b[3]};
  if (j.contains("children")) {
    for (const auto& c : j["children"]) n.children.push_back(parse_node(c));
  }
  if (j.contains("visible_when")) n.visible_when = parse_conditions(j["visible_when"]);
  n.clickable = j.value("clickable", default_clickable(n.component_class));
  return n;
}

std::vector<std::string> strings(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  return j[key].get<std::vector<std::string>>();
}

// Validation ----------------------------------------------------------------

class Validator {
 public:
  explicit Validator(const AppModel& m) : m_(m) {}

  void run() {
    if (m_.screen_width <= 0 || m_.screen_height <= 0) fail("screen must have positive size");
    if (m_.activities.empty()) fail("no activities");
    std::set<std::string> names;
    for (const auto& a : m_.activities) {
      if (!names.insert(a.name).second) fail("duplicate activity '" + a.name + "'");
    }
    if (!m_.activity(m_.initial_activity)) {
      fail("initial activity '" + m_.initial_activity + "' does not exist");
    }

    auto block_methods = m_.block_methods();
    std::size_t block_count = 0;
    for (const auto& [_, blocks] : m_.methods) block_count += blocks.size();
    if (block_methods.size() != block_count) fail("block ids are not unique across methods");
    blocks_ = std::move(block_methods);

    std::set<std::string> flag_names;
    for (const auto& f : m_.flags) {
      if (!flag_names.insert(f.name).second) fail("duplicate flag '" + f.name + "'");
      if (f.min > f.max) fail("flag '" + f.name + "' has min > max");
      if (f.clean < f.min || f.clean > f.max || f.dirty < f.min || f.dirty > f.max) {
        fail("flag '" + f.name + "' initial value out of range");
      }
    }

    // Shared windows: keyboard and dialogs can appear over any activity.
    std::set<std::string> shared_ids;
    if (m_.keyboard) collect_tree(*m_.keyboard, m_.screen(), shared_ids, "keyboard");
    for (const auto& d : m_.dialogs) {
      std::set<std::string> ids;
      for (const auto& n : d.components) collect_tree(n, m_.screen(), ids, "dialog " + d.name);
      check_blocks(d.on_show, "dialog " + d.name);
      for (const auto& id : ids) {
        if (!shared_ids.insert(id).second) fail("component id '" + id + "' reused across windows");
      }
    }
    for (const auto& a : m_.activities) {
      std::set<std::string> ids;
      for (const auto& n : a.components) collect_tree(n, m_.screen(), ids, a.name);
      for (const auto& id : ids) {
        if (shared_ids.contains(id)) {
          fail("component id '" + id + "' in " + a.name + " collides with a shared window");
        }
      }
      activity_ids_[a.name] = std::move(ids);
      check_blocks(a.on_enter, a.name);
    }
    if (m_.clean_launch_dialog && !m_.dialog(*m_.clean_launch_dialog)) {
      fail("clean launch dialog '" + *m_.clean_launch_dialog + "' does not exist");
    }
    for (const auto& e : m_.encapsulated) {
      if (!find_anywhere(e)) fail("encapsulated component '" + e + "' does not exist");
    }

    for (const auto& t : m_.transitions) check_transition(t);
    check_centers();
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ModelError("app model '" + m_.name + "': " + msg);
  }

  void collect_tree(const ComponentNode& n, const Rect& parent, std::set<std::string>& ids,
                    const std::string& where) {
    if (n.id.empty() || n.component_class.empty()) fail("component without id or class in " + where);
    if (n.id.find(kTokenSeparator) != std::string::npos ||
        n.component_class.find(kTokenSeparator) != std::string::npos) {
      fail("component '" + n.id + "' uses the token separator");
    }
    if (n.bounds.empty()) fail("component '" + n.id + "' has zero area");
    if (!m_.screen().contains(n.bounds)) fail("component '" + n.id + "' lies outside the screen");
    if (!parent.contains(n.bounds)) fail("component '" + n.id + "' lies outside its parent");
    if (!ids.insert(n.id).second) fail("duplicate component id '" + n.id + "' in " + where);
    for (const auto& c : n.visible_when) check_flag(c.flag);
    for (const auto& c : n.children) collect_tree(c, n.bounds, ids, where);
  }

  void check_flag(const std::string& f) const {
    if (!m_.flag(f)) fail("unknown flag '" + f + "'");
  }

  void check_blocks(const std::vector<std::string>& blocks, const std::string& where) const {
    for (const auto& b : blocks) {
      if (!blocks_.contains(b)) fail("unknown block '" + b + "' in " + where);
    }
  }

  static const ComponentNode* find_in(const ComponentNode& n, std::string_view id) {
    if (n.id == id) return &n;
    for (const auto& c : n.children) {
      if (auto* f = find_in(c, id)) return f;
    }
    return nullptr;
  }

  const ComponentNode* find_anywhere(std::string_view id) const {
    if (m_.keyboard) {
      if (auto* f = find_in(*m_.keyboard, id)) return f;
    }
    for (const auto& d : m_.dialogs) {
      for (const auto& n : d.components) {
        if (auto* f = find_in(n, id)) return f;
      }
    }
    for (const auto& a : m_.activities) {
      for (const auto& n : a.components) {
        if (auto* f = find_in(n, id)) return f;
      }
    }
    return nullptr;
  }

  void check_transition(const Transition& t) const {
    const std::string where = "transition #" + std::to_string(t.index);
    if (!m_.activity(t.activity)) fail(where + " from missing activity '" + t.activity + "'");
    bool found = activity_ids_.at(t.activity).contains(t.component);
    if (!found && m_.keyboard) found = find_in(*m_.keyboard, t.component) != nullptr;
    for (const auto& d : m_.dialogs) {
      for (const auto& n : d.components) found = found || find_in(n, t.component) != nullptr;
    }
    if (!found) fail(where + " on missing component '" + t.component + "'");
    if (t.target && !m_.activity(*t.target)) {
      fail(where + " to missing activity '" + *t.target + "'");
    }
    if (t.open_dialog && !m_.dialog(*t.open_dialog)) {
      fail(where + " opens missing dialog '" + *t.open_dialog + "'");
    }
    for (const auto& c : t.guard) check_flag(c.flag);
    for (const auto& [f, _] : t.set) check_flag(f);
    for (const auto& [f, _] : t.add) check_flag(f);
    for (const auto& f : t.toggle) check_flag(f);
    check_blocks(t.blocks, where);
  }

  // A command aimed at a component's center must reach that component.
  void check_centers() const {
    std::set<std::string> targets;
    for (const auto& t : m_.transitions) targets.insert(t.component);
    std::function<void(const ComponentNode&)> walk = [&](const ComponentNode& n) {
      if (targets.contains(n.id)) {
        const Point c = n.bounds.center();
        for (const auto& child : n.children) {
          if (child.bounds.contains(c)) {
            fail("center of '" + n.id + "' is covered by child '" + child.id + "'");
          }
        }
      }
      for (const auto& child : n.children) walk(child);
    };
    if (m_.keyboard) walk(*m_.keyboard);
    for (const auto& d : m_.dialogs) {
      for (const auto& n : d.components) walk(n);
    }
    for (const auto& a : m_.activities) {
      for (const auto& n : a.components) walk(n);
    }
  }

  const AppModel& m_;
  std::map<std::string, std::string> blocks_;
  std::map<std::string, std::set<std::string>> activity_ids_;
};

}  // namespace

AppModel parse_app_model(const json& doc) {
  AppModel m;
  try {
    m.name = doc.value("name", "app");
    m.screen_width = doc.at("screen").at("width").get<int>();
    m.screen_height = doc.at("screen").at("height").get<int>();
    m.initial_activity = doc.at("initial_activity").get<std::string>();
    if (doc.contains("flags")) {
      for (const auto& f : doc["flags"]) {
        FlagSpec spec;
        spec.name = f.at("name").get<std::string>();
        spec.clean = f.value("clean", 0);
        spec.dirty = f.value("dirty", spec.clean);
        spec.min = f.value("min", 0);
        spec.max = f.value("max", 1);
        m.flags.push_back(std::move(spec));
      }
    }
    if (doc.contains("methods")) {
      for (const auto& [name, blocks] : doc["methods"].items()) {
        m.methods[name] = blocks.get<std::vector<std::string>>();
      }
    }
    for (const auto& a : doc.at("activities")) {
      ActivitySpec spec;
      spec.name = a.at("name").get<std::string>();
      for (const auto& n : a.at("components")) spec.components.push_back(parse_node(n));
      spec.on_enter = strings(a, "on_enter");
      m.activities.push_back(std::move(spec));
    }
    if (doc.contains("keyboard") && !doc["keyboard"].is_null()) {
      m.keyboard = parse_node(doc["keyboard"]);
    }
    if (doc.contains("dialogs")) {
      for (const auto& d : doc["dialogs"]) {
        DialogSpec spec;
        spec.name = d.at("name").get<std::string>();
        for (const auto& n : d.at("components")) spec.components.push_back(parse_node(n));
        spec.on_show = strings(d, "on_show");
        m.dialogs.push_back(std::move(spec));
      }
    }
    if (doc.contains("clean_launch_dialog") && !doc["clean_launch_dialog"].is_null()) {
      m.clean_launch_dialog = doc["clean_launch_dialog"].get<std::string>();
    }
    for (const auto& e : strings(doc, "encapsulated")) m.encapsulated.insert(e);
    if (doc.contains("transitions")) {
      for (const auto& t : doc["transitions"]) {
        Transition tr;
        tr.index = m.transitions.size();
        tr.activity = t.at("activity").get<std::string>();
        tr.component = t.at("component").get<std::string>();
        auto action = parse_action(t.at("action").get<std::string>());
        if (!action) throw ParseError("transition #" + std::to_string(tr.index) + ": bad action");
        tr.action = *action;
        if (t.contains("guard")) tr.guard = parse_conditions(t["guard"]);
        if (t.contains("target") && !t["target"].is_null()) {
          tr.target = t["target"].get<std::string>();
        }
        if (t.contains("keyboard")) {
          const auto k = t["keyboard"].get<std::string>();
          if (k == "show") {
            tr.keyboard = KeyboardEffect::kShow;
          } else if (k == "hide") {
            tr.keyboard = KeyboardEffect::kHide;
          } else {
            throw ParseError("transition #" + std::to_string(tr.index) + ": bad keyboard effect");
          }
        }
        if (t.contains("open_dialog")) tr.open_dialog = t["open_dialog"].get<std::string>();
        tr.dismiss_dialog = t.value("dismiss_dialog", false);
        if (t.contains("set")) tr.set = t["set"].get<std::map<std::string, int>>();
        if (t.contains("add")) tr.add = t["add"].get<std::map<std::string, int>>();
        tr.toggle = strings(t, "toggle");
        tr.blocks = strings(t, "blocks");
        m.transitions.push_back(std::move(tr));
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("app model: ") + e.what());
  }
  Validator(m).run();
  return m;
}

AppModel load_app_model(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open app model " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  return parse_app_model(doc);
}

}  // namespace evseq
