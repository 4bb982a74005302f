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

// GUI-level event tuples and their token encoding.
//
// An event is the tuple <activity, window, component, action, class>. Its
// canonical token joins the five fields with '#':
//
//   MainActivity#ACTIVITY#btn_ok#CLICK#Button
//
// Tokens are the words of the language models; corpus files hold one token
// per line with a blank line between sequences.

#ifndef EVSEQ_EVENT_H_
#define EVSEQ_EVENT_H_

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace evseq {

enum class Window { kActivity, kKeyboard };
enum class Action { kClick, kLongClick, kSwipe };

inline constexpr char kTokenSeparator = '#';
inline constexpr std::string_view kStartToken = "<s>";

std::string_view to_string(Window w);
std::string_view to_string(Action a);
std::optional<Window> parse_window(std::string_view s);
std::optional<Action> parse_action(std::string_view s);

struct GuiEvent {
  std::string activity;
  Window window = Window::kActivity;
  std::string component;
  Action action = Action::kClick;
  std::string component_class;

  auto operator<=>(const GuiEvent&) const = default;
};

// Canonical lexeme for a GuiEvent. Ordered and hashable by text.
class EventToken {
 public:
  EventToken() = default;
  explicit EventToken(std::string text) : text_(std::move(text)) {}

  const std::string& text() const { return text_; }
  bool is_start() const { return text_ == kStartToken; }

  auto operator<=>(const EventToken&) const = default;

 private:
  std::string text_;
};

std::ostream& operator<<(std::ostream& os, const EventToken& t);

// Throws EncodingError when a field is empty or contains the separator.
EventToken encode_token(const GuiEvent& e);
// Throws EncodingError on wrong arity, empty fields, or unknown enum values.
GuiEvent decode_token(const EventToken& t);

enum class Provenance { kMined, kStatic, kBoth };
std::string_view to_string(Provenance p);
std::optional<Provenance> parse_provenance(std::string_view s);

// The set of tokens a model may emit, with where each token came from.
class Vocabulary {
 public:
  // Adds or merges a token. Adding MINED to a STATIC token yields BOTH.
  // Rejects "<s>" and undecodable tokens.
  void add(const EventToken& token, Provenance provenance);

  bool contains(const EventToken& token) const { return entries_.contains(token); }
  std::optional<Provenance> provenance(const EventToken& token) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Tokens in lexicographic order; index positions are stable for a given set.
  std::vector<EventToken> tokens() const;
  const std::map<EventToken, Provenance>& entries() const { return entries_; }

  bool operator==(const Vocabulary&) const = default;

 private:
  std::map<EventToken, Provenance> entries_;
};

struct EventSequence {
  std::vector<EventToken> tokens;
  std::string source_id;
};

// Corpus files: one token per line, blank lines separate sequences.
std::vector<EventSequence> parse_corpus(std::string_view text, std::string_view source_prefix = "seq");
std::string format_corpus(const std::vector<EventSequence>& corpus);

// Vocabulary of every token that appears in the corpus, marked MINED.
Vocabulary mined_vocabulary(const std::vector<EventSequence>& corpus);

}  // namespace evseq

#endif  // EVSEQ_EVENT_H_
