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

#include "evseq/chimp.h"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <utility>

#include "evseq/error.h"
#include "evseq/generator.h"

namespace evseq {
namespace {

constexpr int kLongClickMs = 600;
constexpr int kSwipeMs = 300;
constexpr int kSwipeDistance = 100;

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

ScenarioStep locate_and_build(const Session& session, const GuiEvent& e) {
  ViewHierarchy view = session.view();
  auto loc = view.find(e.component);
  if (!loc) throw Error("component not in hierarchy: " + e.component);
  return {e, build_input_command(e.action, loc->node->bounds)};
}

}  // namespace

std::vector<EventToken> ActionableScenario::tokens() const {
  std::vector<EventToken> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(encode_token(s.event));
  return out;
}

InputCommand build_input_command(Action action, const Rect& bounds) {
  if (bounds.empty()) throw Error("cannot aim at a zero-area component");
  Point c = bounds.center();
  switch (action) {
    case Action::kClick:
      return InputCommand::tap(c);
    case Action::kLongClick:
      return InputCommand::long_tap(c, kLongClickMs);
    case Action::kSwipe:
      return InputCommand::swipe(c, {c.x, c.y - std::min(bounds.height / 2, kSwipeDistance)}, kSwipeMs);
  }
  throw Error("unknown action");
}

SerialResult validate_serial(std::span<const EventToken> sequence, Session& session,
                             std::string origin, std::uint64_t seed) {
  SerialResult out;
  out.scenario.origin = std::move(origin);
  out.scenario.seed = seed;
  out.scenario.launch = session.state().launch_mode;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    GuiEvent e;
    try {
      e = decode_token(sequence[i]);
    } catch (const EncodingError&) {
      out.skipped.push_back(i);
      continue;
    }
    if (!session.is_feasible(e)) {
      out.skipped.push_back(i);
      continue;
    }
    ScenarioStep step = locate_and_build(session, e);
    session.execute(step.command);
    out.scenario.steps.push_back(std::move(step));
    out.executed.push_back(i);
  }
  return out;
}

EventProposer model_proposer(const LanguageModel& model, const FlavorConfig& flavor) {
  return [&model, flavor](std::span<const EventToken> history, Rng& rng) {
    std::size_t cut = 0;
    for (std::size_t i = 0; i < history.size(); ++i) {
      if (!model.vocabulary().contains(history[i])) cut = i + 1;
    }
    return generate_sequence(model, flavor, history.subspan(cut), 1, rng).tokens.front();
  };
}

InteractiveResult validate_interactive(int k, const EventProposer& propose, Session& session,
                                       Rng& rng, HistoryMode history, std::string origin,
                                       std::uint64_t seed) {
  InteractiveResult out;
  out.scenario.origin = std::move(origin);
  out.scenario.seed = seed;
  out.scenario.launch = session.state().launch_mode;
  std::vector<EventToken> executed;
  for (int step = 0; step < k; ++step) {
    std::span<const EventToken> h(executed);
    if (history == HistoryMode::kLastOne && !h.empty()) h = h.last(1);
    EventToken proposal = propose(h, rng);

    std::optional<GuiEvent> chosen;
    try {
      GuiEvent e = decode_token(proposal);
      if (session.is_feasible(e)) chosen = std::move(e);
    } catch (const EncodingError&) {
    }
    if (!chosen) {
      std::vector<GuiEvent> options = session.feasible_events();
      if (options.empty()) {
        out.aborted = true;
        break;
      }
      chosen = options[rng.below(options.size())];
      ++out.fallbacks;
    }
    ScenarioStep s = locate_and_build(session, *chosen);
    session.execute(s.command);
    executed.push_back(encode_token(s.event));
    out.scenario.steps.push_back(std::move(s));
  }
  return out;
}

ReplayResult replay_scenario(const ActionableScenario& scenario, const AppModel& model) {
  Session session(model, scenario.launch);
  ReplayResult out;
  for (const auto& step : scenario.steps) {
    StepResult r = session.execute(step.command);
    if (!r.event || *r.event != step.event) {
      out.actionable = false;
      break;
    }
    ++out.steps_replayed;
  }
  out.coverage = session.coverage();
  out.final_state = session.state();
  return out;
}

std::string format_scenario(const ActionableScenario& scenario) {
  std::ostringstream os;
  os << "# scenario origin=" << scenario.origin << " seed=" << scenario.seed
     << " launch=" << to_string(scenario.launch) << " steps=" << scenario.steps.size() << '\n';
  for (std::size_t i = 0; i < scenario.steps.size(); ++i) {
    const auto& s = scenario.steps[i];
    os << (i + 1) << '\t' << encode_token(s.event).text() << '\t' << format_command(s.command)
       << '\n';
  }
  return os.str();
}

ActionableScenario parse_scenario(std::string_view text) {
  ActionableScenario out;
  bool header = false;
  int line_no = 0;
  std::size_t declared = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header) {
      constexpr std::string_view kPrefix = "# scenario";
      if (!line.starts_with(kPrefix)) throw ParseError("missing scenario header", line_no);
      for (std::string_view field : split(line.substr(kPrefix.size()), ' ')) {
        if (field.empty()) continue;
        auto eq = field.find('=');
        if (eq == std::string_view::npos) throw ParseError("bad header field", line_no);
        std::string_view key = field.substr(0, eq), val = field.substr(eq + 1);
        if (key == "origin") {
          out.origin = std::string(val);
        } else if (key == "seed" || key == "steps") {
          std::uint64_t v = 0;
          auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
          if (ec != std::errc() || p != val.data() + val.size()) {
            throw ParseError("bad number in header", line_no);
          }
          (key == "seed" ? out.seed : declared) = v;
        } else if (key == "launch") {
          auto m = parse_launch_mode(val);
          if (!m) throw ParseError("bad launch mode", line_no);
          out.launch = *m;
        } else {
          throw ParseError("unknown header field: " + std::string(key), line_no);
        }
      }
      header = true;
      continue;
    }
    auto cols = split(line, '\t');
    if (cols.size() != 3) throw ParseError("expected step, token, command", line_no);
    std::size_t index = 0;
    auto [p, ec] = std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), index);
    if (ec != std::errc() || index != out.steps.size() + 1) {
      throw ParseError("step numbers must count up from 1", line_no);
    }
    try {
      out.steps.push_back({decode_token(EventToken(std::string(cols[1]))), parse_command(cols[2])});
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!header) throw ParseError("empty scenario", line_no);
  if (declared != out.steps.size()) throw ParseError("step count does not match header", line_no);
  return out;
}

}  // namespace evseq
