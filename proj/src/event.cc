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

#include "evseq/event.h"

#include <algorithm>
#include <ostream>

#include "evseq/error.h"

namespace evseq {

std::string_view to_string(Window w) {
  return w == Window::kActivity ? "ACTIVITY" : "KEYBOARD";
}

std::string_view to_string(Action a) {
  switch (a) {
    case Action::kClick:
      return "CLICK";
    case Action::kLongClick:
      return "LONG_CLICK";
    case Action::kSwipe:
      return "SWIPE";
  }
  return "CLICK";
}

std::optional<Window> parse_window(std::string_view s) {
  if (s == "ACTIVITY") return Window::kActivity;
  if (s == "KEYBOARD") return Window::kKeyboard;
  return std::nullopt;
}

std::optional<Action> parse_action(std::string_view s) {
  if (s == "CLICK") return Action::kClick;
  if (s == "LONG_CLICK") return Action::kLongClick;
  if (s == "SWIPE") return Action::kSwipe;
  return std::nullopt;
}

std::ostream& operator<<(std::ostream& os, const EventToken& t) { return os << t.text(); }

namespace {

void check_field(std::string_view name, std::string_view value) {
  if (value.empty()) throw EncodingError("empty " + std::string(name));
  if (value.find(kTokenSeparator) != std::string_view::npos) {
    throw EncodingError(std::string(name) + " '" + std::string(value) +
                        "' contains the separator '#'");
  }
  if (value.find_first_of("\r\n") != std::string_view::npos) {
    throw EncodingError(std::string(name) + " contains a line break");
  }
}

}  // namespace

EventToken encode_token(const GuiEvent& e) {
  check_field("activity", e.activity);
  check_field("component", e.component);
  check_field("component class", e.component_class);
  std::string text;
  text.reserve(e.activity.size() + e.component.size() + e.component_class.size() + 24);
  text += e.activity;
  text += kTokenSeparator;
  text += to_string(e.window);
  text += kTokenSeparator;
  text += e.component;
  text += kTokenSeparator;
  text += to_string(e.action);
  text += kTokenSeparator;
  text += e.component_class;
  return EventToken(std::move(text));
}

GuiEvent decode_token(const EventToken& t) {
  std::vector<std::string_view> fields;
  std::string_view rest = t.text();
  while (true) {
    auto pos = rest.find(kTokenSeparator);
    fields.push_back(rest.substr(0, pos));
    if (pos == std::string_view::npos) break;
    rest.remove_prefix(pos + 1);
  }
  if (fields.size() != 5) {
    throw EncodingError("token '" + t.text() + "' has " + std::to_string(fields.size()) +
                        " fields, expected 5");
  }
  for (auto f : fields) {
    if (f.empty()) throw EncodingError("token '" + t.text() + "' has an empty field");
  }
  auto window = parse_window(fields[1]);
  if (!window) throw EncodingError("unknown window '" + std::string(fields[1]) + "'");
  auto action = parse_action(fields[3]);
  if (!action) throw EncodingError("unknown action '" + std::string(fields[3]) + "'");
  return GuiEvent{std::string(fields[0]), *window, std::string(fields[2]), *action,
                  std::string(fields[4])};
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kMined:
      return "MINED";
    case Provenance::kStatic:
      return "STATIC";
    case Provenance::kBoth:
      return "BOTH";
  }
  return "MINED";
}

std::optional<Provenance> parse_provenance(std::string_view s) {
  if (s == "MINED") return Provenance::kMined;
  if (s == "STATIC") return Provenance::kStatic;
  if (s == "BOTH") return Provenance::kBoth;
  return std::nullopt;
}

void Vocabulary::add(const EventToken& token, Provenance provenance) {
  if (token.is_start()) throw EncodingError("the start marker cannot enter a vocabulary");
  decode_token(token);
  auto [it, inserted] = entries_.emplace(token, provenance);
  if (!inserted && it->second != provenance) it->second = Provenance::kBoth;
}

std::optional<Provenance> Vocabulary::provenance(const EventToken& token) const {
  auto it = entries_.find(token);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::vector<EventToken> Vocabulary::tokens() const {
  std::vector<EventToken> out;
  out.reserve(entries_.size());
  for (const auto& [token, _] : entries_) out.push_back(token);
  return out;
}

std::vector<EventSequence> parse_corpus(std::string_view text, std::string_view source_prefix) {
  std::vector<EventSequence> corpus;
  EventSequence current;
  std::size_t line_no = 0;
  auto flush = [&] {
    if (!current.tokens.empty()) {
      current.source_id = std::string(source_prefix) + "-" + std::to_string(corpus.size());
      corpus.push_back(std::move(current));
      current = EventSequence{};
    }
  };
  while (!text.empty()) {
    auto pos = text.find('\n');
    std::string_view line = text.substr(0, pos);
    text.remove_prefix(pos == std::string_view::npos ? text.size() : pos + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      flush();
      continue;
    }
    EventToken token{std::string(line)};
    try {
      decode_token(token);
    } catch (const EncodingError& e) {
      throw ParseError(e.what(), line_no);
    }
    current.tokens.push_back(std::move(token));
  }
  flush();
  return corpus;
}

std::string format_corpus(const std::vector<EventSequence>& corpus) {
  std::string out;
  bool first = true;
  for (const auto& seq : corpus) {
    if (seq.tokens.empty()) continue;
    if (!first) out += '\n';
    first = false;
    for (const auto& t : seq.tokens) {
      out += t.text();
      out += '\n';
    }
  }
  return out;
}

Vocabulary mined_vocabulary(const std::vector<EventSequence>& corpus) {
  Vocabulary v;
  for (const auto& seq : corpus) {
    for (const auto& t : seq.tokens) v.add(t, Provenance::kMined);
  }
  return v;
}

}  // namespace evseq
