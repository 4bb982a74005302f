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

// Order-n language models over event tokens.
//
// Two estimators share one set of counts:
//
//  * Back-off (BO): Katz back-off. Observed n-grams get Good-Turing
//    discounted estimates alpha(w|h); the freed mass is spread over the
//    unobserved successors in proportion to the next-lower order, scaled by
//    the back-off weight beta(h).
//  * Interpolated (INTERP): modified Kneser-Ney. Every order contributes,
//    p(w|h) = alpha(w|h) + gamma(h) * p(w|h'), with lower orders estimated
//    from continuation counts and the unigram level mixed with a uniform
//    distribution over the vocabulary.
//
// Every sequence is left-padded with order-1 "<s>" markers. Vocabulary
// tokens that never occur in the corpus get a pseudo-count of one at the
// unigram level, so both models assign them positive unigram mass.

#ifndef EVSEQ_NGRAM_H_
#define EVSEQ_NGRAM_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "evseq/distribution.h"
#include "evseq/event.h"

namespace evseq {

enum class ModelKind { kBackoff, kInterpolated };

std::string_view to_string(ModelKind k);  // "BO" / "INTERP"
std::optional<ModelKind> parse_model_kind(std::string_view s);

struct SmoothingOptions {
  // Good-Turing discounts apply to counts r <= katz_cutoff.
  int katz_cutoff = 5;
  // BO only. When false, alpha(w|h) = c(hw)/c(h) and beta(h) = 0.
  bool discounting = true;
  // Absolute discount used whenever the closed-form estimates are unusable.
  double fallback_discount = 0.5;
  // Overrides the estimated modified Kneser-Ney discounts {D1, D2, D3+}.
  std::optional<std::array<double, 3>> fixed_kn_discounts;
};

using TokenId = std::uint32_t;
using Context = std::vector<TokenId>;

// Raw n-gram counts of orders 1..n over padded sequences. Only n-grams that
// end on a real token are counted; "<s>" appears in contexts only.
class NGramCounts {
 public:
  NGramCounts(int order, const Vocabulary& vocab);

  // Throws ModelError for tokens outside the vocabulary.
  void add_sequence(std::span<const EventToken> tokens);
  // Adds `count` occurrences of a single n-gram (context + word).
  void add_ngram(std::span<const TokenId> gram, std::uint64_t count);

  int order() const { return order_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  const std::vector<EventToken>& tokens() const { return tokens_; }
  TokenId start_id() const { return static_cast<TokenId>(tokens_.size()); }
  // Id of `token`; "<s>" maps to start_id(); unknown tokens map to nullopt.
  std::optional<TokenId> id_of(const EventToken& token) const;
  const EventToken& token_of(TokenId id) const;

  // counts(k)[context][word] for n-grams of length k (1..order).
  const std::map<Context, std::map<TokenId, std::uint64_t>>& counts(int k) const {
    return counts_.at(k - 1);
  }
  // N_r over the order-k n-grams: r -> number of n-grams seen exactly r times.
  std::map<std::uint64_t, std::uint64_t> counts_of_counts(int k) const;
  std::uint64_t total_tokens() const { return total_tokens_; }

 private:
  int order_;
  Vocabulary vocab_;
  std::vector<EventToken> tokens_;
  std::map<EventToken, TokenId> ids_;
  std::vector<std::map<Context, std::map<TokenId, std::uint64_t>>> counts_;
  std::uint64_t total_tokens_ = 0;
  EventToken start_token_{std::string(kStartToken)};
};

// Discount parameters actually used at one order.
struct OrderDiscounts {
  int order = 0;
  // "good-turing", "absolute", "kneser-ney", "none".
  std::string method;
  // BO: ratio r*/r for r = 1..cutoff. INTERP: {D1, D2, D3+}.
  std::vector<double> values;
};

class LanguageModel {
 public:
  LanguageModel(ModelKind kind, const NGramCounts& counts, const SmoothingOptions& options = {});

  ModelKind kind() const { return kind_; }
  int order() const { return order_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  const std::vector<EventToken>& tokens() const { return tokens_; }
  const SmoothingOptions& options() const { return options_; }
  const std::vector<OrderDiscounts>& discounts() const { return discounts_; }

  // p(w | h). The history is truncated to its last order-1 tokens and
  // left-padded with "<s>" when shorter. Throws ModelError if w is not in
  // the vocabulary. History tokens outside the vocabulary make the context
  // unseen at every order that includes them.
  double prob(const EventToken& w, std::span<const EventToken> history) const;

  // p(.|h) for every vocabulary token, in vocabulary order.
  Distribution distribution(std::span<const EventToken> history) const;

  // BO: normalized alpha(.|h) over the observed successors of the longest
  // observed suffix of h, or the unigram distribution when no suffix of
  // length >= 1 was observed. INTERP: same as distribution().
  Distribution sampling_distribution(std::span<const EventToken> history) const;

  // Number of context tokens the deepest observed level used (0 = unigram).
  int sampling_level(std::span<const EventToken> history) const;

  // True when the order-(|h|+1) context h was observed in training.
  bool context_observed(std::span<const EventToken> context) const;

  // Natural log of the probability of the sequence (chain rule with padding).
  double sequence_logprob(std::span<const EventToken> sequence) const;

 private:
  struct ContextStats {
    std::map<TokenId, double> alpha;
    double backoff = 0.0;  // beta(h) for BO, gamma(h) for INTERP
  };

  void build_backoff(const NGramCounts& counts);
  void build_interpolated(const NGramCounts& counts);
  // k = n-gram length, context holds the k-1 preceding ids.
  double prob_at(int k, std::span<const TokenId> context, TokenId w) const;
  Context make_context(std::span<const EventToken> history) const;
  TokenId require_id(const EventToken& w) const;

  ModelKind kind_;
  int order_;
  Vocabulary vocab_;
  std::vector<EventToken> tokens_;
  std::map<EventToken, TokenId> ids_;
  TokenId start_id_;
  TokenId unknown_id_;
  SmoothingOptions options_;
  std::vector<OrderDiscounts> discounts_;
  std::vector<double> unigram_;
  // levels_[k-1] holds contexts of length k-1, k >= 2. levels_[0] unused.
  std::vector<std::map<Context, ContextStats>> levels_;
};

struct ModelPair {
  LanguageModel backoff;
  LanguageModel interpolated;

  const LanguageModel& get(ModelKind k) const {
    return k == ModelKind::kBackoff ? backoff : interpolated;
  }
};

// Counts a corpus. Throws ModelError on an empty corpus, order < 1, or a
// corpus token that is not in the vocabulary.
NGramCounts count_corpus(const std::vector<EventSequence>& corpus, const Vocabulary& vocab,
                         int order);

ModelPair train(const std::vector<EventSequence>& corpus, const Vocabulary& vocab, int order,
                const SmoothingOptions& options = {});

// Structured-text model file: vocabulary with provenance, options, every
// counted n-gram, and the discounts in effect (informational; loading
// recomputes them from the counts).
nlohmann::json save_models(const NGramCounts& counts, const SmoothingOptions& options);
struct LoadedModels {
  NGramCounts counts;
  SmoothingOptions options;
  ModelPair models;
};
LoadedModels load_models(const nlohmann::json& doc);

}  // namespace evseq

#endif  // EVSEQ_NGRAM_H_
