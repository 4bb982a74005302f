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

// Sequence generation service.
//
// Requests and responses are single-line JSON objects:
//
//   {"model": "INTERP", "flavor": "up", "history": [], "length": 100}
//   {"tokens": [...], "logprobs": [...], "error": null}
//
// "history" may also be the empty string. Optional request fields: "seed"
// (unsigned 64-bit) and "lambda" (strange flavor mixture, default 0.5).
// Without a seed the request is answered with a seed derived from the
// service default seed and the request text, so identical requests get
// identical answers.

#ifndef EVSEQ_GENERATOR_H_
#define EVSEQ_GENERATOR_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "evseq/event.h"
#include "evseq/flavor.h"
#include "evseq/ngram.h"
#include "evseq/rng.h"

namespace evseq {

struct GenerationRequest {
  ModelKind model = ModelKind::kInterpolated;
  Flavor flavor = Flavor::kUp;
  std::vector<EventToken> history;
  int length = 1;
  std::optional<std::uint64_t> seed;
  double lambda = kDefaultLambda;
};

struct GenerationResponse {
  std::vector<EventToken> tokens;
  // Natural-log model probability of each token given its context.
  std::vector<double> logprobs;
};

// Throws RequestError for unknown model/flavor strings, malformed fields,
// or a non-positive length.
GenerationRequest parse_request(const nlohmann::json& j);
nlohmann::json to_json(const GenerationRequest& r);
nlohmann::json to_json(const GenerationResponse& r);
GenerationResponse parse_response(const nlohmann::json& j);

// Samples `length` tokens autoregressively. Each draw conditions on the
// last order-1 tokens of "<s>"-padded history plus everything generated so
// far. Throws RequestError when a history token is "<s>" or outside the
// vocabulary, or when length < 1.
GenerationResponse generate_sequence(const LanguageModel& model, const FlavorConfig& flavor,
                                     std::span<const EventToken> history, int length, Rng& rng);

class SequenceGenerator {
 public:
  SequenceGenerator(std::shared_ptr<const ModelPair> models, std::uint64_t default_seed = 0)
      : models_(std::move(models)), default_seed_(default_seed) {}

  const ModelPair& models() const { return *models_; }
  int order() const { return models_->backoff.order(); }

  GenerationResponse handle(const GenerationRequest& req) const;
  // Wire-level entry point: never throws; errors are reported in "error".
  std::string handle_line(const std::string& line) const;

  // Serves newline-delimited requests until end of input.
  void serve(std::istream& in, std::ostream& out) const;
  // Serves on a Unix domain socket; one thread per connection. Returns after
  // `max_connections` connections have closed (0 = run forever).
  void serve_unix_socket(const std::string& path, int max_connections = 0) const;

 private:
  std::shared_ptr<const ModelPair> models_;
  std::uint64_t default_seed_;
};

// Reads the default seed from EVSEQ_SEED when set, else `fallback`.
std::uint64_t default_seed_from_env(std::uint64_t fallback = 0);

}  // namespace evseq

#endif  // EVSEQ_GENERATOR_H_
