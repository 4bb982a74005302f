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

// Mining GUI-level event sequences from getevent-style input logs.
//
// Line grammar (one event per line):
//
//   [   10.000100] /dev/input/event2: 0003 0035 0000000a
//    timestamp      device             type code value
//
// Codes follow Linux evdev: EV_ABS (0003) with ABS_MT_POSITION_X (0035),
// ABS_MT_POSITION_Y (0036), ABS_MT_TRACKING_ID (0039; ffffffff lifts the
// contact); EV_KEY (0001) BTN_TOUCH (014a); EV_SYN (0000) SYN_REPORT (0000)
// closes a frame. Only single-contact gestures are supported.

#ifndef EVSEQ_GETEVENT_H_
#define EVSEQ_GETEVENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evseq/event.h"
#include "evseq/gui.h"

namespace evseq {

namespace evdev {
inline constexpr std::uint16_t kEvSyn = 0x0000;
inline constexpr std::uint16_t kEvKey = 0x0001;
inline constexpr std::uint16_t kEvAbs = 0x0003;
inline constexpr std::uint16_t kSynReport = 0x0000;
inline constexpr std::uint16_t kBtnTouch = 0x014a;
inline constexpr std::uint16_t kAbsMtSlot = 0x002f;
inline constexpr std::uint16_t kAbsMtPositionX = 0x0035;
inline constexpr std::uint16_t kAbsMtPositionY = 0x0036;
inline constexpr std::uint16_t kAbsMtTrackingId = 0x0039;
inline constexpr std::uint32_t kTrackingIdUp = 0xffffffff;
}  // namespace evdev

struct RawInputLine {
  std::int64_t timestamp_us = 0;
  std::string device;
  std::uint16_t etype = 0;
  std::uint16_t code = 0;
  std::uint32_t value = 0;
  std::size_t line_no = 0;

  double seconds() const { return static_cast<double>(timestamp_us) / 1e6; }
};

// Throws ParseError (with the 1-based line number) on malformed lines or
// decreasing timestamps. Blank lines are skipped.
std::vector<RawInputLine> parse_log(std::string_view text);
std::string format_line(const RawInputLine& line);

// All lines of one contact, from the tracking-id down line through the
// SYN_REPORT that closes the lift frame.
struct GestureGroup {
  std::vector<RawInputLine> lines;
  std::int64_t t_start_us = 0;
  std::int64_t t_end_us = 0;
  // One sample per SYN_REPORT frame while the contact is down.
  std::vector<Point> path;
};

// Throws ParseError for a lift without a contact, coordinates outside a
// contact, multi-contact input, a contact without samples, or an
// unterminated final contact.
std::vector<GestureGroup> group_events(const std::vector<RawInputLine>& lines);

struct GestureThresholds {
  double long_click_s = 0.5;
  int tap_slop_px = 24;
};

struct MinedGesture {
  Action kind = Action::kClick;
  Point start;
  Point end;
  std::int64_t duration_us = 0;
};

MinedGesture classify_gesture(const GestureGroup& g, const GestureThresholds& t = {});

// Throws MissedTarget when no component contains the gesture's start.
GuiEvent translate_gesture(const MinedGesture& m, const GuiOracle& oracle);

// The device command that reproduces a mined gesture.
InputCommand gesture_command(const MinedGesture& m);

struct MineResult {
  EventSequence sequence;
  std::size_t missed = 0;
  // Set when the replayer rejected a command; `sequence` holds what was
  // mined before that point.
  std::optional<std::string> error;
};

// Translates each gesture against the oracle, then replays it so the next
// gesture sees the updated GUI. Gestures on dead space are dropped.
MineResult mine_log(std::string_view text, const GuiOracle& oracle, Replayer& replayer,
                    const GestureThresholds& thresholds = {}, std::string source_id = "log");

struct SynthesisOptions {
  std::int64_t start_us = 10'000'000;
  std::int64_t gap_us = 1'500'000;
  std::int64_t tap_us = 60'000;
  int swipe_frames = 6;
  std::string device = "/dev/input/event2";
};

// Renders commands as the log a touch screen would produce for them.
std::string synthesize_log(const std::vector<InputCommand>& commands,
                           const SynthesisOptions& options = {});

}  // namespace evseq

#endif  // EVSEQ_GETEVENT_H_
