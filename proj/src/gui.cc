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

#include "evseq/gui.h"

#include <sstream>
#include <vector>

#include "evseq/error.h"

namespace evseq {

Action InputCommand::action() const {
  switch (kind) {
    case CommandKind::kTap:
      return Action::kClick;
    case CommandKind::kLongTap:
      return Action::kLongClick;
    case CommandKind::kSwipe:
      return Action::kSwipe;
  }
  return Action::kClick;
}

std::string format_command(const InputCommand& cmd) {
  std::ostringstream os;
  if (cmd.kind == CommandKind::kTap) {
    os << "tap " << cmd.start.x << ' ' << cmd.start.y;
  } else {
    os << "swipe " << cmd.start.x << ' ' << cmd.start.y << ' ' << cmd.end.x << ' ' << cmd.end.y
       << ' ' << cmd.duration_ms;
  }
  return os.str();
}

InputCommand parse_command(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string verb;
  is >> verb;
  std::vector<long> args;
  long v;
  while (is >> v) args.push_back(v);
  if (!is.eof()) throw ParseError("bad input command '" + std::string(text) + "'");
  auto i = [&](std::size_t k) { return static_cast<int>(args[k]); };
  if (verb == "tap" && args.size() == 2) return InputCommand::tap({i(0), i(1)});
  if (verb == "swipe" && args.size() == 5) {
    Point a{i(0), i(1)}, b{i(2), i(3)};
    if (a == b) return InputCommand::long_tap(a, i(4));
    return InputCommand::swipe(a, b, i(4));
  }
  throw ParseError("bad input command '" + std::string(text) + "'");
}

}  // namespace evseq
