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

// Sampling flavors.
//
//   up       the model's own next-event distribution.
//   down     probabilities reversed over the tokens sorted by probability,
//            so the least likely token receives the largest mass.
//   strange  lambda * up + (1 - lambda) * down.
//
// For back-off models the flavors act on the normalized estimates of the
// observed successors at the longest observed context; for interpolated
// models they act on the full distribution over the vocabulary.

#ifndef EVSEQ_FLAVOR_H_
#define EVSEQ_FLAVOR_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "evseq/distribution.h"
#include "evseq/ngram.h"
#include "evseq/rng.h"

namespace evseq {

enum class Flavor { kUp, kDown, kStrange };

std::string_view to_string(Flavor f);  // "up" / "down" / "strange"
std::optional<Flavor> parse_flavor(std::string_view s);

inline constexpr double kDefaultLambda = 0.5;

class FlavorConfig {
 public:
  static FlavorConfig up(std::uint64_t seed = 0) { return {Flavor::kUp, std::nullopt, seed}; }
  static FlavorConfig down(std::uint64_t seed = 0) { return {Flavor::kDown, std::nullopt, seed}; }
  // Throws RequestError when lambda is outside [0, 1].
  static FlavorConfig strange(double lambda = kDefaultLambda, std::uint64_t seed = 0);
  static FlavorConfig of(Flavor f, double lambda = kDefaultLambda, std::uint64_t seed = 0);

  Flavor flavor() const { return flavor_; }
  // Present iff flavor() == kStrange.
  std::optional<double> lambda() const { return lambda_; }
  std::uint64_t rng_seed() const { return seed_; }

 private:
  FlavorConfig(Flavor f, std::optional<double> lambda, std::uint64_t seed)
      : flavor_(f), lambda_(lambda), seed_(seed) {}

  Flavor flavor_;
  std::optional<double> lambda_;
  std::uint64_t seed_;
};

// Normalizes `d`, sorts descending (ties shuffled with `rng`), and hands the
// i-th largest token the i-th smallest probability.
Distribution transform_down(const Distribution& d, Rng& rng);

// Pointwise mixture; throws ModelError if the supports differ.
Distribution transform_strange(const Distribution& up, const Distribution& down, double lambda);

// The distribution a flavor samples from given history h.
Distribution flavored_distribution(const LanguageModel& model, const FlavorConfig& cfg,
                                   std::span<const EventToken> history, Rng& rng);

// Inverse-CDF draw over the entries in order.
const EventToken& sample_from(const Distribution& d, Rng& rng);

EventToken sample(const LanguageModel& model, const FlavorConfig& cfg,
                  std::span<const EventToken> history, Rng& rng);

}  // namespace evseq

#endif  // EVSEQ_FLAVOR_H_
