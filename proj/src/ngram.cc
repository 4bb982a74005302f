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

#include "evseq/ngram.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "evseq/error.h"

namespace evseq {

using nlohmann::json;

namespace {

constexpr double kMassEpsilon = 1e-12;

}  // namespace

std::string_view to_string(ModelKind k) { return k == ModelKind::kBackoff ? "BO" : "INTERP"; }

std::optional<ModelKind> parse_model_kind(std::string_view s) {
  if (s == "BO") return ModelKind::kBackoff;
  if (s == "INTERP") return ModelKind::kInterpolated;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// NGramCounts

NGramCounts::NGramCounts(int order, const Vocabulary& vocab)
    : order_(order), vocab_(vocab), tokens_(vocab.tokens()) {
  if (order < 1) throw ModelError("model order must be >= 1");
  if (vocab.empty()) throw ModelError("empty vocabulary");
  for (TokenId i = 0; i < tokens_.size(); ++i) ids_.emplace(tokens_[i], i);
  counts_.resize(order);
}

std::optional<TokenId> NGramCounts::id_of(const EventToken& token) const {
  if (token.is_start()) return start_id();
  auto it = ids_.find(token);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const EventToken& NGramCounts::token_of(TokenId id) const {
  return id == start_id() ? start_token_ : tokens_.at(id);
}

void NGramCounts::add_sequence(std::span<const EventToken> tokens) {
  std::vector<TokenId> padded(order_ - 1, start_id());
  for (const auto& t : tokens) {
    auto id = t.is_start() ? std::nullopt : id_of(t);
    if (!id) throw ModelError("token not in vocabulary: " + t.text());
    padded.push_back(*id);
  }
  for (std::size_t i = order_ - 1; i < padded.size(); ++i) {
    for (int k = 1; k <= order_; ++k) {
      add_ngram(std::span(padded).subspan(i + 1 - k, k), 1);
    }
  }
}

void NGramCounts::add_ngram(std::span<const TokenId> gram, std::uint64_t count) {
  const int k = static_cast<int>(gram.size());
  if (k < 1 || k > order_) throw ModelError("n-gram length out of range");
  if (gram.back() >= start_id()) throw ModelError("n-gram must end on a vocabulary token");
  Context context(gram.begin(), gram.end() - 1);
  counts_[k - 1][std::move(context)][gram.back()] += count;
  if (k == 1) total_tokens_ += count;
}

std::map<std::uint64_t, std::uint64_t> NGramCounts::counts_of_counts(int k) const {
  std::map<std::uint64_t, std::uint64_t> n;
  for (const auto& [_, successors] : counts(k)) {
    for (const auto& [_, c] : successors) ++n[c];
  }
  return n;
}

NGramCounts count_corpus(const std::vector<EventSequence>& corpus, const Vocabulary& vocab,
                         int order) {
  if (corpus.empty()) throw ModelError("empty training corpus");
  NGramCounts counts(order, vocab);
  for (const auto& seq : corpus) counts.add_sequence(seq.tokens);
  if (counts.total_tokens() == 0) throw ModelError("training corpus has no tokens");
  return counts;
}

ModelPair train(const std::vector<EventSequence>& corpus, const Vocabulary& vocab, int order,
                const SmoothingOptions& options) {
  NGramCounts counts = count_corpus(corpus, vocab, order);
  return ModelPair{LanguageModel(ModelKind::kBackoff, counts, options),
                   LanguageModel(ModelKind::kInterpolated, counts, options)};
}

// ---------------------------------------------------------------------------
// LanguageModel

LanguageModel::LanguageModel(ModelKind kind, const NGramCounts& counts,
                             const SmoothingOptions& options)
    : kind_(kind),
      order_(counts.order()),
      vocab_(counts.vocabulary()),
      tokens_(counts.tokens()),
      start_id_(counts.start_id()),
      unknown_id_(counts.start_id() + 1),
      options_(options) {
  if (options_.katz_cutoff < 1) throw ModelError("Katz cutoff must be >= 1");
  if (!(options_.fallback_discount > 0.0 && options_.fallback_discount < 1.0)) {
    throw ModelError("fallback discount must lie in (0, 1)");
  }
  for (TokenId i = 0; i < tokens_.size(); ++i) ids_.emplace(tokens_[i], i);
  levels_.resize(order_);
  if (kind_ == ModelKind::kBackoff) {
    build_backoff(counts);
  } else {
    build_interpolated(counts);
  }
}

void LanguageModel::build_backoff(const NGramCounts& counts) {
  const std::size_t v = tokens_.size();

  // Unigrams: maximum likelihood over pseudo-count-augmented counts.
  std::vector<double> c1(v, 0.0);
  if (auto it = counts.counts(1).find(Context{}); it != counts.counts(1).end()) {
    for (const auto& [w, c] : it->second) c1[w] = static_cast<double>(c);
  }
  for (auto& c : c1) {
    if (c == 0.0) c = 1.0;
  }
  const double total1 = std::accumulate(c1.begin(), c1.end(), 0.0);
  unigram_.resize(v);
  for (std::size_t w = 0; w < v; ++w) unigram_[w] = c1[w] / total1;
  discounts_.push_back({1, "none", {}});

  const double fallback = options_.fallback_discount;
  for (int k = 2; k <= order_; ++k) {
    OrderDiscounts od{k, "none", {}};
    std::vector<double> ratio;  // ratio[r] for r = 1..cutoff
    if (options_.discounting) {
      const auto n = counts.counts_of_counts(k);
      const int cutoff = options_.katz_cutoff;
      auto nr = [&](std::uint64_t r) {
        auto it = n.find(r);
        return it == n.end() ? 0.0 : static_cast<double>(it->second);
      };
      bool good_turing = true;
      ratio.assign(cutoff + 1, 1.0);
      for (int r = 1; r <= cutoff && good_turing; ++r) {
        if (nr(r) == 0.0 || nr(r + 1) == 0.0) {
          good_turing = false;
          break;
        }
        ratio[r] = (r + 1) * nr(r + 1) / (r * nr(r));
        if (!(ratio[r] > 0.0 && ratio[r] < 1.0)) good_turing = false;
      }
      if (good_turing) {
        od.method = "good-turing";
        od.values.assign(ratio.begin() + 1, ratio.end());
      } else {
        ratio.clear();
        od.method = "absolute";
        od.values = {fallback};
      }
    }
    discounts_.push_back(od);

    auto discounted = [&](std::uint64_t c, bool absolute) {
      const double r = static_cast<double>(c);
      if (!options_.discounting) return r;
      if (absolute || ratio.empty()) return r - fallback;
      return c < ratio.size() ? r * ratio[c] : r;
    };

    for (const auto& [context, successors] : counts.counts(k)) {
      double total = 0.0;
      for (const auto& [_, c] : successors) total += static_cast<double>(c);
      ContextStats stats;
      const bool covers_vocabulary = successors.size() == v;
      auto fill = [&](bool absolute) {
        stats.alpha.clear();
        double mass = 0.0;
        for (const auto& [w, c] : successors) {
          const double a = covers_vocabulary ? c / total : discounted(c, absolute) / total;
          stats.alpha.emplace(w, a);
          mass += a;
        }
        return 1.0 - mass;
      };
      double leftover = fill(false);
      if (options_.discounting && !covers_vocabulary && leftover <= kMassEpsilon) {
        // Every successor is above the Good-Turing cutoff: nothing was freed.
        leftover = fill(true);
      }
      if (options_.discounting && !covers_vocabulary) {
        std::span<const TokenId> lower(context.begin() + 1, context.end());
        double unseen = 0.0;
        for (TokenId w = 0; w < v; ++w) {
          if (!successors.contains(w)) unseen += prob_at(k - 1, lower, w);
        }
        stats.backoff = unseen > 0.0 ? leftover / unseen : 0.0;
      }
      levels_[k - 1].emplace(context, std::move(stats));
    }
  }
}

void LanguageModel::build_interpolated(const NGramCounts& counts) {
  const std::size_t v = tokens_.size();

  for (int k = order_; k >= 1; --k) {
    // Highest order: raw counts. Lower orders: number of distinct left
    // extensions v such that c(v h w) > 0.
    std::map<Context, std::map<TokenId, std::uint64_t>> adjusted;
    if (k == order_) {
      adjusted = counts.counts(k);
    } else {
      for (const auto& [context, successors] : counts.counts(k + 1)) {
        Context shorter(context.begin() + 1, context.end());
        auto& slot = adjusted[shorter];
        for (const auto& [w, _] : successors) ++slot[w];
      }
    }
    if (k == 1) {
      auto& uni = adjusted[Context{}];
      for (TokenId w = 0; w < v; ++w) {
        if (!uni.contains(w)) uni[w] = 1;
      }
    }

    std::array<double, 3> d{};
    OrderDiscounts od{k, "kneser-ney", {}};
    if (options_.fixed_kn_discounts) {
      d = *options_.fixed_kn_discounts;
    } else {
      std::array<double, 5> n{};
      for (const auto& [_, successors] : adjusted) {
        for (const auto& [_, c] : successors) {
          if (c <= 4) n[c] += 1.0;
        }
      }
      bool ok = n[1] > 0 && n[2] > 0 && n[3] > 0 && n[4] > 0;
      if (ok) {
        const double y = n[1] / (n[1] + 2.0 * n[2]);
        d = {1.0 - 2.0 * y * n[2] / n[1], 2.0 - 3.0 * y * n[3] / n[2],
             3.0 - 4.0 * y * n[4] / n[3]};
        ok = d[0] > 0.0 && d[1] > 0.0 && d[2] > 0.0;
      }
      if (!ok) {
        d.fill(options_.fallback_discount);
        od.method = "absolute";
      }
    }
    od.values.assign(d.begin(), d.end());
    discounts_.push_back(od);

    auto discount = [&](std::uint64_t c) {
      const double r = static_cast<double>(c);
      const double dc = c == 1 ? d[0] : c == 2 ? d[1] : d[2];
      return std::min(dc, r);
    };

    for (const auto& [context, successors] : adjusted) {
      double total = 0.0;
      for (const auto& [_, c] : successors) total += static_cast<double>(c);
      if (total == 0.0) continue;
      ContextStats stats;
      double freed = 0.0;
      for (const auto& [w, c] : successors) {
        const double dc = discount(c);
        stats.alpha.emplace(w, (static_cast<double>(c) - dc) / total);
        freed += dc;
      }
      stats.backoff = freed / total;
      if (k == 1) {
        unigram_.assign(v, stats.backoff / static_cast<double>(v));
        for (const auto& [w, a] : stats.alpha) unigram_[w] += a;
      } else {
        levels_[k - 1].emplace(context, std::move(stats));
      }
    }
  }
  std::reverse(discounts_.begin(), discounts_.end());
}

double LanguageModel::prob_at(int k, std::span<const TokenId> context, TokenId w) const {
  if (k == 1) return unigram_[w];
  const auto& level = levels_[k - 1];
  auto it = level.find(Context(context.begin(), context.end()));
  auto lower = context.subspan(1);
  if (it == level.end()) return prob_at(k - 1, lower, w);
  const ContextStats& stats = it->second;
  auto a = stats.alpha.find(w);
  if (kind_ == ModelKind::kBackoff) {
    if (a != stats.alpha.end()) return a->second;
    return stats.backoff == 0.0 ? 0.0 : stats.backoff * prob_at(k - 1, lower, w);
  }
  const double alpha = a == stats.alpha.end() ? 0.0 : a->second;
  return alpha + stats.backoff * prob_at(k - 1, lower, w);
}

Context LanguageModel::make_context(std::span<const EventToken> history) const {
  const std::size_t width = static_cast<std::size_t>(order_ - 1);
  Context context(width, start_id_);
  const std::size_t take = std::min(width, history.size());
  for (std::size_t i = 0; i < take; ++i) {
    const EventToken& t = history[history.size() - take + i];
    TokenId id = unknown_id_;
    if (t.is_start()) {
      id = start_id_;
    } else if (auto it = ids_.find(t); it != ids_.end()) {
      id = it->second;
    }
    context[width - take + i] = id;
  }
  return context;
}

TokenId LanguageModel::require_id(const EventToken& w) const {
  auto it = ids_.find(w);
  if (it == ids_.end()) throw ModelError("token not in vocabulary: " + w.text());
  return it->second;
}

double LanguageModel::prob(const EventToken& w, std::span<const EventToken> history) const {
  const TokenId id = require_id(w);
  const Context context = make_context(history);
  return prob_at(order_, context, id);
}

Distribution LanguageModel::distribution(std::span<const EventToken> history) const {
  const Context context = make_context(history);
  Distribution d;
  d.entries.reserve(tokens_.size());
  for (TokenId w = 0; w < tokens_.size(); ++w) {
    d.entries.emplace_back(tokens_[w], prob_at(order_, context, w));
  }
  d.normalize();
  return d;
}

int LanguageModel::sampling_level(std::span<const EventToken> history) const {
  const Context context = make_context(history);
  for (int k = order_; k >= 2; --k) {
    Context suffix(context.end() - (k - 1), context.end());
    if (levels_[k - 1].contains(suffix)) return k - 1;
  }
  return 0;
}

Distribution LanguageModel::sampling_distribution(std::span<const EventToken> history) const {
  if (kind_ == ModelKind::kInterpolated) return distribution(history);
  const int level = sampling_level(history);
  if (level == 0) {
    Distribution d;
    for (TokenId w = 0; w < tokens_.size(); ++w) d.entries.emplace_back(tokens_[w], unigram_[w]);
    d.normalize();
    return d;
  }
  const Context context = make_context(history);
  Context suffix(context.end() - level, context.end());
  const ContextStats& stats = levels_[level].at(suffix);
  Distribution d;
  for (const auto& [w, a] : stats.alpha) d.entries.emplace_back(tokens_[w], a);
  d.normalize();
  return d;
}

bool LanguageModel::context_observed(std::span<const EventToken> context) const {
  if (context.empty()) return true;
  if (context.size() >= static_cast<std::size_t>(order_)) return false;
  Context ids;
  for (const auto& t : context) {
    if (t.is_start()) {
      ids.push_back(start_id_);
    } else if (auto it = ids_.find(t); it != ids_.end()) {
      ids.push_back(it->second);
    } else {
      return false;
    }
  }
  return levels_[context.size()].contains(ids);
}

double LanguageModel::sequence_logprob(std::span<const EventToken> sequence) const {
  double total = 0.0;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    total += std::log(prob(sequence[i], sequence.first(i)));
  }
  return total;
}

// ---------------------------------------------------------------------------
// Serialization

json save_models(const NGramCounts& counts, const SmoothingOptions& options) {
  json doc;
  doc["format"] = "evseq-ngram";
  doc["version"] = 1;
  doc["order"] = counts.order();
  json vocab = json::array();
  for (const auto& [token, prov] : counts.vocabulary().entries()) {
    vocab.push_back({{"token", token.text()}, {"provenance", std::string(to_string(prov))}});
  }
  doc["vocabulary"] = std::move(vocab);
  json opts;
  opts["katz_cutoff"] = options.katz_cutoff;
  opts["discounting"] = options.discounting;
  opts["fallback_discount"] = options.fallback_discount;
  if (options.fixed_kn_discounts) opts["fixed_kn_discounts"] = *options.fixed_kn_discounts;
  doc["options"] = std::move(opts);
  json grams = json::array();
  for (int k = 1; k <= counts.order(); ++k) {
    for (const auto& [context, successors] : counts.counts(k)) {
      for (const auto& [w, c] : successors) {
        json gram = json::array();
        for (TokenId id : context) gram.push_back(counts.token_of(id).text());
        gram.push_back(counts.token_of(w).text());
        grams.push_back({{"gram", std::move(gram)}, {"count", c}});
      }
    }
  }
  doc["ngrams"] = std::move(grams);
  json discounts;
  for (ModelKind kind : {ModelKind::kBackoff, ModelKind::kInterpolated}) {
    LanguageModel m(kind, counts, options);
    json levels = json::array();
    for (const auto& od : m.discounts()) {
      levels.push_back({{"order", od.order}, {"method", od.method}, {"values", od.values}});
    }
    discounts[std::string(to_string(kind))] = std::move(levels);
  }
  doc["discounts"] = std::move(discounts);
  return doc;
}

LoadedModels load_models(const json& doc) {
  try {
    if (doc.at("format") != "evseq-ngram") throw ModelError("not an evseq model file");
    if (doc.at("version") != 1) throw ModelError("unsupported model file version");
    Vocabulary vocab;
    for (const auto& e : doc.at("vocabulary")) {
      auto prov = parse_provenance(e.at("provenance").get<std::string>());
      if (!prov) throw ModelError("bad provenance in model file");
      vocab.add(EventToken(e.at("token").get<std::string>()), *prov);
    }
    NGramCounts counts(doc.at("order").get<int>(), vocab);
    for (const auto& g : doc.at("ngrams")) {
      std::vector<TokenId> ids;
      for (const auto& t : g.at("gram")) {
        auto id = counts.id_of(EventToken(t.get<std::string>()));
        if (!id) throw ModelError("model file n-gram uses unknown token " + t.get<std::string>());
        ids.push_back(*id);
      }
      counts.add_ngram(ids, g.at("count").get<std::uint64_t>());
    }
    SmoothingOptions options;
    const json& o = doc.at("options");
    options.katz_cutoff = o.at("katz_cutoff").get<int>();
    options.discounting = o.at("discounting").get<bool>();
    options.fallback_discount = o.at("fallback_discount").get<double>();
    if (o.contains("fixed_kn_discounts")) {
      options.fixed_kn_discounts = o["fixed_kn_discounts"].get<std::array<double, 3>>();
    }
    ModelPair models{LanguageModel(ModelKind::kBackoff, counts, options),
                     LanguageModel(ModelKind::kInterpolated, counts, options)};
    return LoadedModels{std::move(counts), options, std::move(models)};
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace evseq
