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

#ifndef EVSEQ_TESTS_TEST_UTIL_H_
#define EVSEQ_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "evseq/app_model.h"
#include "evseq/event.h"
#include "evseq/ngram.h"

namespace evseq::testing {

inline std::filesystem::path source_path(const std::string& rel) {
  return std::filesystem::path(EVSEQ_SOURCE_DIR) / rel;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline const AppModel& tasklist() {
  static const AppModel m = load_app_model(source_path("fixtures/tasklist/app.json"));
  return m;
}

inline const AppModel& wordbook() {
  static const AppModel m = load_app_model(source_path("fixtures/wordbook/app.json"));
  return m;
}

// Short names for corpus tests: "A" -> "Main#ACTIVITY#A#CLICK#Button".
inline EventToken tok(std::string_view name) {
  return EventToken("Main#ACTIVITY#" + std::string(name) + "#CLICK#Button");
}

inline std::vector<EventToken> toks(std::string_view names) {
  std::vector<EventToken> out;
  std::istringstream in{std::string(names)};
  std::string w;
  while (in >> w) out.push_back(tok(w));
  return out;
}

inline std::vector<std::string> texts(std::string_view names) {
  std::vector<std::string> out;
  for (const auto& t : toks(names)) out.push_back(t.text());
  return out;
}

inline std::vector<EventSequence> corpus_of(const std::vector<std::string>& sequences) {
  std::vector<EventSequence> out;
  for (const auto& s : sequences) out.push_back({toks(s), "test"});
  return out;
}

inline Vocabulary vocab_of(std::string_view names, Provenance p = Provenance::kMined) {
  Vocabulary v;
  for (const auto& t : toks(names)) v.add(t, p);
  return v;
}

}  // namespace evseq::testing

#endif  // EVSEQ_TESTS_TEST_UTIL_H_
