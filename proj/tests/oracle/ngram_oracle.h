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

// Brute-force reference evaluators for the two smoothed n-gram estimators.
// Every probability is recomputed from raw corpus counts on each call, with
// strings as tokens and no precomputed tables, so the code shares nothing
// with the library beyond the estimator definitions.

#ifndef EVSEQ_TESTS_ORACLE_NGRAM_ORACLE_H_
#define EVSEQ_TESTS_ORACLE_NGRAM_ORACLE_H_

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using Gram = std::vector<std::string>;

inline const std::string kStart = "<s>";

class Corpus {
 public:
  Corpus(std::vector<std::vector<std::string>> sequences, std::vector<std::string> vocab, int n)
      : seqs_(std::move(sequences)), vocab_(std::move(vocab)), n_(n) {
    std::sort(vocab_.begin(), vocab_.end());
  }

  int order() const { return n_; }
  const std::vector<std::string>& vocab() const { return vocab_; }

  // Occurrences of g ending on a real token of a padded sequence.
  long count(const Gram& g) const {
    long total = 0;
    for (const auto& s : seqs_) {
      Gram padded(n_ - 1, kStart);
      padded.insert(padded.end(), s.begin(), s.end());
      for (std::size_t end = n_ - 1; end < padded.size(); ++end) {
        if (end + 1 < g.size()) continue;
        std::size_t begin = end + 1 - g.size();
        if (std::equal(g.begin(), g.end(), padded.begin() + begin)) ++total;
      }
    }
    return total;
  }

  // Every distinct k-gram with a nonzero count.
  std::set<Gram> grams(std::size_t k) const {
    std::set<Gram> out;
    for (const auto& s : seqs_) {
      Gram padded(n_ - 1, kStart);
      padded.insert(padded.end(), s.begin(), s.end());
      for (std::size_t end = n_ - 1; end < padded.size(); ++end) {
        if (end + 1 < k) continue;
        out.insert(Gram(padded.begin() + (end + 1 - k), padded.begin() + end + 1));
      }
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> seqs_;
  std::vector<std::string> vocab_;
  int n_;
};

inline Gram tail(const Gram& h) { return Gram(h.begin() + 1, h.end()); }
inline Gram cat(Gram h, const std::string& w) {
  h.push_back(w);
  return h;
}

// Katz back-off with Good-Turing ratios up to `cutoff`, absolute discount
// `fallback` when the ratios are unusable, unigram pseudo-count 1.
class Backoff {
 public:
  Backoff(const Corpus& c, int cutoff = 5, double fallback = 0.5, bool discounting = true)
      : c_(c), cutoff_(cutoff), fallback_(fallback), discounting_(discounting) {}

  // h holds exactly `len` tokens; the evaluator works at order len + 1.
  double p(const std::string& w, const Gram& h) const {
    if (h.empty()) {
      double num = 0.0, den = 0.0;
      for (const auto& v : c_.vocab()) {
        double cv = std::max<long>(c_.count({v}), 1);
        den += cv;
        if (v == w) num = cv;
      }
      return num / den;
    }
    double ch = 0.0;
    std::set<std::string> seen;
    for (const auto& v : c_.vocab()) {
      long cv = c_.count(cat(h, v));
      ch += cv;
      if (cv > 0) seen.insert(v);
    }
    if (ch == 0.0) return p(w, tail(h));
    if (seen.size() == c_.vocab().size()) return c_.count(cat(h, w)) / ch;

    const std::size_t k = h.size() + 1;
    auto alpha = [&](const std::string& v, bool absolute) {
      double r = c_.count(cat(h, v));
      if (!discounting_) return r / ch;
      auto ratios = gt_ratios(k);
      if (absolute || !ratios) return (r - fallback_) / ch;
      return r <= cutoff_ ? r * (*ratios)[static_cast<int>(r)] / ch : r / ch;
    };
    bool absolute = false;
    double mass = 0.0;
    for (const auto& v : seen) mass += alpha(v, false);
    if (discounting_ && 1.0 - mass <= 1e-12) {
      absolute = true;
      mass = 0.0;
      for (const auto& v : seen) mass += alpha(v, true);
    }
    if (seen.contains(w)) return alpha(w, absolute);
    if (!discounting_) return 0.0;
    double unseen_lower = 0.0;
    for (const auto& v : c_.vocab()) {
      if (!seen.contains(v)) unseen_lower += p(v, tail(h));
    }
    return (1.0 - mass) / unseen_lower * p(w, tail(h));
  }

  // r -> r*/r for r = 1..cutoff, or nothing when Good-Turing is unusable.
  std::optional<std::map<int, double>> gt_ratios(std::size_t k) const {
    std::map<long, double> nr;
    for (const auto& g : c_.grams(k)) nr[c_.count(g)] += 1.0;
    std::map<int, double> out;
    for (int r = 1; r <= cutoff_; ++r) {
      if (nr[r] == 0.0 || nr[r + 1] == 0.0) return std::nullopt;
      double ratio = (r + 1) * nr[r + 1] / nr[r] / r;
      if (ratio <= 0.0 || ratio >= 1.0) return std::nullopt;
      out[r] = ratio;
    }
    return out;
  }

 private:
  const Corpus& c_;
  int cutoff_;
  double fallback_;
  bool discounting_;
};

// Interpolated modified Kneser-Ney. Top order uses raw counts, lower orders
// count distinct left extensions; zero unigram counts become 1.
class KneserNey {
 public:
  KneserNey(const Corpus& c, std::optional<std::array<double, 3>> fixed = std::nullopt,
            double fallback = 0.5)
      : c_(c), fixed_(fixed), fallback_(fallback) {}

  double p(const std::string& w, const Gram& h) const {
    const std::size_t k = h.size() + 1;
    double total = 0.0;
    for (const auto& v : c_.vocab()) total += ck(cat(h, v));
    if (total == 0.0) return p(w, tail(h));
    const auto d = discounts(k);
    auto disc = [&](double c) {
      if (c == 0.0) return 0.0;
      double dc = c == 1.0 ? d[0] : c == 2.0 ? d[1] : d[2];
      return std::min(dc, c);
    };
    double gamma = 0.0;
    for (const auto& v : c_.vocab()) gamma += disc(ck(cat(h, v)));
    gamma /= total;
    const double cw = ck(cat(h, w));
    const double alpha = (cw - disc(cw)) / total;
    if (k == 1) return alpha + gamma / static_cast<double>(c_.vocab().size());
    return alpha + gamma * p(w, tail(h));
  }

  // Count of gram g under the estimator used at order |g|.
  double ck(const Gram& g) const {
    const std::size_t k = g.size();
    double c = 0.0;
    if (static_cast<int>(k) == c_.order()) {
      c = static_cast<double>(c_.count(g));
    } else {
      std::vector<std::string> left = c_.vocab();
      left.push_back(kStart);
      for (const auto& v : left) {
        Gram longer{v};
        longer.insert(longer.end(), g.begin(), g.end());
        if (c_.count(longer) > 0) c += 1.0;
      }
    }
    if (k == 1 && c == 0.0) c = 1.0;
    return c;
  }

  std::array<double, 3> discounts(std::size_t k) const {
    if (fixed_) return *fixed_;
    std::set<Gram> grams = c_.grams(k);
    if (k == 1) {
      for (const auto& v : c_.vocab()) grams.insert({v});
    }
    // Lower orders may contain grams starting with "<s>" that never end a
    // padded position at length k; enumerate suffixes of longer grams too.
    if (static_cast<int>(k) < c_.order()) {
      for (const auto& g : c_.grams(k + 1)) grams.insert(tail(g));
    }
    std::array<double, 5> n{};
    for (const auto& g : grams) {
      double c = ck(g);
      if (c >= 1.0 && c <= 4.0) n[static_cast<int>(c)] += 1.0;
    }
    if (n[1] > 0 && n[2] > 0 && n[3] > 0 && n[4] > 0) {
      double y = n[1] / (n[1] + 2 * n[2]);
      std::array<double, 3> d{1 - 2 * y * n[2] / n[1], 2 - 3 * y * n[3] / n[2],
                              3 - 4 * y * n[4] / n[3]};
      if (d[0] > 0 && d[1] > 0 && d[2] > 0) return d;
    }
    return {fallback_, fallback_, fallback_};
  }

 private:
  const Corpus& c_;
  std::optional<std::array<double, 3>> fixed_;
  double fallback_;
};

}  // namespace oracle

#endif  // EVSEQ_TESTS_ORACLE_NGRAM_ORACLE_H_
