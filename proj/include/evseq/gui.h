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

// Geometry, device input commands, and the two device-side interfaces the
// log miner needs: a GUI oracle (view hierarchy, focus, keyboard) and a
// replayer that executes input commands.

#ifndef EVSEQ_GUI_H_
#define EVSEQ_GUI_H_

#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "evseq/event.h"

namespace evseq {

struct Point {
  int x = 0;
  int y = 0;
  auto operator<=>(const Point&) const = default;
};

struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  bool contains(Point p) const {
    return p.x >= x && p.x < x + width && p.y >= y && p.y < y + height;
  }
  bool contains(const Rect& r) const {
    return r.x >= x && r.y >= y && r.x + r.width <= x + width && r.y + r.height <= y + height;
  }
  Point center() const { return {x + width / 2, y + height / 2}; }
  bool empty() const { return width <= 0 || height <= 0; }
  auto operator<=>(const Rect&) const = default;
};

enum class CommandKind { kTap, kLongTap, kSwipe };

// A device input command in the style of `adb shell input`. Taps use only
// `start`; long taps and swipes carry an end point and a duration.
struct InputCommand {
  CommandKind kind = CommandKind::kTap;
  Point start;
  Point end;
  int duration_ms = 0;

  static InputCommand tap(Point p) { return {CommandKind::kTap, p, p, 0}; }
  static InputCommand long_tap(Point p, int duration_ms) {
    return {CommandKind::kLongTap, p, p, duration_ms};
  }
  static InputCommand swipe(Point from, Point to, int duration_ms) {
    return {CommandKind::kSwipe, from, to, duration_ms};
  }

  Action action() const;
  auto operator<=>(const InputCommand&) const = default;
};

// "tap 50 200" or "swipe 50 200 50 160 300". A zero-displacement swipe
// reads back as a long tap.
std::string format_command(const InputCommand& cmd);
InputCommand parse_command(std::string_view text);

struct HitResult {
  std::string component;
  std::string component_class;
  Window window = Window::kActivity;
  Rect bounds;
};

class GuiOracle {
 public:
  virtual ~GuiOracle() = default;
  virtual std::string current_activity() const = 0;
  virtual bool keyboard_shown() const = 0;
  // Deepest component of the queryable hierarchy containing `p`.
  virtual std::optional<HitResult> hit_test(Point p) const = 0;
};

class Replayer {
 public:
  virtual ~Replayer() = default;
  // Throws Error when the device rejects the command.
  virtual void replay(const InputCommand& cmd) = 0;
};

}  // namespace evseq

#endif  // EVSEQ_GUI_H_
