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

#include "evseq/getevent.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "evseq/error.h"

namespace evseq {

namespace {

bool is_hex(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

// Parses exactly `width` hex digits followed by end-of-field.
std::uint32_t parse_hex_field(std::string_view& rest, std::size_t width, const char* name,
                              std::size_t line_no) {
  std::size_t n = 0;
  while (n < rest.size() && rest[n] != ' ' && rest[n] != '\t') ++n;
  std::string_view field = rest.substr(0, n);
  if (field.size() != width) {
    throw ParseError(std::string(name) + " must be " + std::to_string(width) + " hex digits, got '" +
                         std::string(field) + "'",
                     line_no);
  }
  std::uint32_t v = 0;
  for (char c : field) {
    if (!is_hex(c)) throw ParseError(std::string("bad hex digit in ") + name, line_no);
    v = v * 16 + static_cast<std::uint32_t>(c <= '9' ? c - '0' : (c | 0x20) - 'a' + 10);
  }
  rest.remove_prefix(n);
  while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
  return v;
}

RawInputLine parse_line(std::string_view s, std::size_t line_no) {
  RawInputLine out;
  out.line_no = line_no;
  if (s.empty() || s.front() != '[') throw ParseError("expected '['", line_no);
  auto close = s.find(']');
  if (close == std::string_view::npos) throw ParseError("expected ']'", line_no);
  std::string_view ts = s.substr(1, close - 1);
  while (!ts.empty() && ts.front() == ' ') ts.remove_prefix(1);
  auto dot = ts.find('.');
  if (dot == std::string_view::npos || dot == 0 || ts.size() - dot - 1 != 6) {
    throw ParseError("timestamp must have six fractional digits", line_no);
  }
  std::int64_t secs = 0, micros = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i == dot) continue;
    if (ts[i] < '0' || ts[i] > '9') throw ParseError("bad timestamp", line_no);
    (i < dot ? secs : micros) = (i < dot ? secs : micros) * 10 + (ts[i] - '0');
  }
  out.timestamp_us = secs * 1'000'000 + micros;

  std::string_view rest = s.substr(close + 1);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  auto colon = rest.find(": ");
  if (colon == std::string_view::npos || colon == 0) throw ParseError("expected device", line_no);
  std::string_view device = rest.substr(0, colon);
  if (auto slash = device.rfind('/'); slash != std::string_view::npos) {
    device.remove_prefix(slash + 1);
  }
  if (device.empty()) throw ParseError("empty device name", line_no);
  out.device = std::string(device);
  rest.remove_prefix(colon + 2);

  out.etype = static_cast<std::uint16_t>(parse_hex_field(rest, 4, "type", line_no));
  out.code = static_cast<std::uint16_t>(parse_hex_field(rest, 4, "code", line_no));
  out.value = parse_hex_field(rest, 8, "value", line_no);
  if (!rest.empty()) throw ParseError("trailing text after value", line_no);
  return out;
}

}  // namespace

std::vector<RawInputLine> parse_log(std::string_view text) {
  std::vector<RawInputLine> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto pos = text.find('\n');
    std::string_view line = text.substr(0, pos);
    text.remove_prefix(pos == std::string_view::npos ? text.size() : pos + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    RawInputLine parsed = parse_line(line, line_no);
    if (!out.empty() && parsed.timestamp_us < out.back().timestamp_us) {
      throw ParseError("timestamp decreases", line_no);
    }
    out.push_back(std::move(parsed));
  }
  return out;
}

std::string format_line(const RawInputLine& line) {
  char ts[32];
  std::snprintf(ts, sizeof ts, "%lld.%06lld",
                static_cast<long long>(line.timestamp_us / 1'000'000),
                static_cast<long long>(line.timestamp_us % 1'000'000));
  char buf[160];
  const std::string device =
      line.device.find('/') == std::string::npos ? "/dev/input/" + line.device : line.device;
  std::snprintf(buf, sizeof buf, "[%13s] %s: %04x %04x %08x", ts, device.c_str(), line.etype,
                line.code, line.value);
  return buf;
}

std::vector<GestureGroup> group_events(const std::vector<RawInputLine>& lines) {
  using namespace evdev;
  std::vector<GestureGroup> groups;
  std::optional<GestureGroup> current;
  int x = -1, y = -1;  // -1 until the contact reports a position
  bool lifted = false;

  for (const auto& line : lines) {
    const bool abs = line.etype == kEvAbs;
    if (!current) {
      if (abs && line.code == kAbsMtTrackingId) {
        if (line.value == kTrackingIdUp) {
          throw ParseError("touch-up without touch-down", line.line_no);
        }
        current = GestureGroup{};
        current->lines.push_back(line);
        current->t_start_us = line.timestamp_us;
        x = -1;
        y = -1;
        lifted = false;
      } else if (abs && (line.code == kAbsMtPositionX || line.code == kAbsMtPositionY)) {
        throw ParseError("coordinate sample outside of a contact", line.line_no);
      }
      continue;
    }

    current->lines.push_back(line);
    if (abs) {
      switch (line.code) {
        case kAbsMtTrackingId:
          if (line.value != kTrackingIdUp) {
            throw ParseError("multi-contact gestures are not supported", line.line_no);
          }
          lifted = true;
          current->t_end_us = line.timestamp_us;
          break;
        case kAbsMtSlot:
          if (line.value != 0) {
            throw ParseError("multi-contact gestures are not supported", line.line_no);
          }
          break;
        case kAbsMtPositionX:
          x = static_cast<int>(line.value);
          break;
        case kAbsMtPositionY:
          y = static_cast<int>(line.value);
          break;
        default:
          break;
      }
    } else if (line.etype == kEvSyn && line.code == kSynReport) {
      if (lifted) {
        if (current->path.empty()) {
          throw ParseError("contact without coordinate samples", line.line_no);
        }
        groups.push_back(std::move(*current));
        current.reset();
      } else if (x >= 0 && y >= 0) {
        current->path.push_back({x, y});
      }
    }
  }
  if (current) {
    throw ParseError("unterminated final contact",
                     current->lines.empty() ? 0 : current->lines.front().line_no);
  }
  return groups;
}

MinedGesture classify_gesture(const GestureGroup& g, const GestureThresholds& t) {
  MinedGesture m;
  m.start = g.path.front();
  m.end = g.path.back();
  m.duration_us = g.t_end_us - g.t_start_us;
  const double dx = m.end.x - m.start.x;
  const double dy = m.end.y - m.start.y;
  if (std::hypot(dx, dy) > t.tap_slop_px) {
    m.kind = Action::kSwipe;
  } else if (static_cast<double>(m.duration_us) >= t.long_click_s * 1e6) {
    m.kind = Action::kLongClick;
  } else {
    m.kind = Action::kClick;
  }
  return m;
}

GuiEvent translate_gesture(const MinedGesture& m, const GuiOracle& oracle) {
  auto hit = oracle.hit_test(m.start);
  if (!hit) {
    throw MissedTarget("no component at (" + std::to_string(m.start.x) + "," +
                       std::to_string(m.start.y) + ")");
  }
  return GuiEvent{oracle.current_activity(), hit->window, hit->component, m.kind,
                  hit->component_class};
}

InputCommand gesture_command(const MinedGesture& m) {
  const int ms = static_cast<int>(m.duration_us / 1000);
  switch (m.kind) {
    case Action::kClick:
      return InputCommand::tap(m.start);
    case Action::kLongClick:
      return InputCommand::long_tap(m.start, ms);
    case Action::kSwipe:
      return InputCommand::swipe(m.start, m.end, ms);
  }
  return InputCommand::tap(m.start);
}

MineResult mine_log(std::string_view text, const GuiOracle& oracle, Replayer& replayer,
                    const GestureThresholds& thresholds, std::string source_id) {
  MineResult result;
  result.sequence.source_id = std::move(source_id);
  for (const auto& group : group_events(parse_log(text))) {
    const MinedGesture m = classify_gesture(group, thresholds);
    try {
      result.sequence.tokens.push_back(encode_token(translate_gesture(m, oracle)));
    } catch (const MissedTarget&) {
      ++result.missed;
    }
    try {
      replayer.replay(gesture_command(m));
    } catch (const Error& e) {
      result.error = e.what();
      return result;
    }
  }
  return result;
}

std::string synthesize_log(const std::vector<InputCommand>& commands,
                           const SynthesisOptions& options) {
  using namespace evdev;
  std::string out;
  std::int64_t t = options.start_us;
  std::uint32_t tracking_id = 1;
  auto emit = [&](std::int64_t ts, std::uint16_t type, std::uint16_t code, std::uint32_t value) {
    out += format_line(RawInputLine{ts, options.device, type, code, value, 0});
    out += '\n';
  };
  auto sample = [&](std::int64_t ts, Point p) {
    emit(ts, kEvAbs, kAbsMtPositionX, static_cast<std::uint32_t>(p.x));
    emit(ts, kEvAbs, kAbsMtPositionY, static_cast<std::uint32_t>(p.y));
    emit(ts, kEvSyn, kSynReport, 0);
  };

  for (const auto& cmd : commands) {
    const std::int64_t duration =
        cmd.kind == CommandKind::kTap ? options.tap_us : std::int64_t{cmd.duration_ms} * 1000;
    emit(t, kEvAbs, kAbsMtTrackingId, tracking_id++);
    emit(t, kEvKey, kBtnTouch, 1);
    sample(t, cmd.start);
    if (cmd.kind == CommandKind::kSwipe) {
      const int frames = std::max(options.swipe_frames, 1);
      for (int i = 1; i <= frames; ++i) {
        const double f = static_cast<double>(i) / frames;
        const Point p{static_cast<int>(std::lround(cmd.start.x + f * (cmd.end.x - cmd.start.x))),
                      static_cast<int>(std::lround(cmd.start.y + f * (cmd.end.y - cmd.start.y)))};
        sample(t + static_cast<std::int64_t>(f * static_cast<double>(duration)), p);
      }
    }
    emit(t + duration, kEvAbs, kAbsMtTrackingId, kTrackingIdUp);
    emit(t + duration, kEvKey, kBtnTouch, 0);
    emit(t + duration, kEvSyn, kSynReport, 0);
    t += duration + options.gap_us;
  }
  return out;
}

}  // namespace evseq
