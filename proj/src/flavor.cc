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

#include "evseq/flavor.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "evseq/error.h"

namespace evseq {

namespace {

// Probabilities closer than this (relative) are treated as a tie.
constexpr double kTieTolerance = 1e-12;

bool tied(double a, double b) {
  return std::fabs(a - b) <= kTieTolerance * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace

std::string_view to_string(Flavor f) {
  switch (f) {
    case Flavor::kUp:
      return "up";
    case Flavor::kDown:
      return "down";
    case Flavor::kStrange:
      return "strange";
  }
  return "up";
}

std::optional<Flavor> parse_flavor(std::string_view s) {
  if (s == "up") return Flavor::kUp;
  if (s == "down") return Flavor::kDown;
  if (s == "strange") return Flavor::kStrange;
  return std::nullopt;
}

FlavorConfig FlavorConfig::strange(double lambda, std::uint64_t seed) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw RequestError("lambda must lie in [0, 1]");
  return {Flavor::kStrange, lambda, seed};
}

FlavorConfig FlavorConfig::of(Flavor f, double lambda, std::uint64_t seed) {
  return f == Flavor::kStrange ? strange(lambda, seed) : FlavorConfig(f, std::nullopt, seed);
}

Distribution transform_down(const Distribution& d, Rng& rng) {
  if (d.empty()) throw ModelError("cannot reverse an empty distribution");
  Distribution normalized = d;
  normalized.normalize();

  std::vector<std::size_t> order(normalized.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return normalized.entries[a].second > normalized.entries[b].second;
  });
  for (std::size_t begin = 0; begin < order.size();) {
    std::size_t end = begin + 1;
    const double p = normalized.entries[order[begin]].second;
    while (end < order.size() && tied(normalized.entries[order[end]].second, p)) ++end;
    rng.shuffle(std::span(order).subspan(begin, end - begin));
    begin = end;
  }

  Distribution out = normalized;
  const std::size_t n = order.size();
  for (std::size_t i = 0; i < n; ++i) {
    out.entries[order[i]].second = normalized.entries[order[n - 1 - i]].second;
  }
  return out;
}

Distribution transform_strange(const Distribution& up, const Distribution& down, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ModelError("lambda must lie in [0, 1]");
  if (up.size() != down.size()) throw ModelError("strange: supports differ");
  Distribution out;
  out.entries.reserve(up.size());
  for (std::size_t i = 0; i < up.size(); ++i) {
    const auto& [token, p] = up.entries[i];
    double q;
    if (down.entries[i].first == token) {
      q = down.entries[i].second;
    } else {
      auto it = std::find_if(down.entries.begin(), down.entries.end(),
                             [&](const auto& e) { return e.first == token; });
      if (it == down.entries.end()) throw ModelError("strange: supports differ");
      q = it->second;
    }
    out.entries.emplace_back(token, lambda * p + (1.0 - lambda) * q);
  }
  return out;
}

Distribution flavored_distribution(const LanguageModel& model, const FlavorConfig& cfg,
                                   std::span<const EventToken> history, Rng& rng) {
  Distribution up = model.sampling_distribution(history);
  switch (cfg.flavor()) {
    case Flavor::kUp:
      return up;
    case Flavor::kDown:
      return transform_down(up, rng);
    case Flavor::kStrange: {
      Distribution down = transform_down(up, rng);
      return transform_strange(up, down, cfg.lambda().value_or(kDefaultLambda));
    }
  }
  return up;
}

const EventToken& sample_from(const Distribution& d, Rng& rng) {
  if (d.empty()) throw ModelError("cannot sample from an empty distribution");
  const double u = rng.uniform() * d.total();
  double cumulative = 0.0;
  for (const auto& [token, p] : d.entries) {
    cumulative += p;
    if (u < cumulative) return token;
  }
  // Rounding left u at the very top: take the last entry with mass.
  for (auto it = d.entries.rbegin(); it != d.entries.rend(); ++it) {
    if (it->second > 0.0) return it->first;
  }
  return d.entries.back().first;
}

EventToken sample(const LanguageModel& model, const FlavorConfig& cfg,
                  std::span<const EventToken> history, Rng& rng) {
  return sample_from(flavored_distribution(model, cfg, history, rng), rng);
}

}  // namespace evseq
