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

#include <gtest/gtest.h>

#include <map>

#include "evseq/error.h"
#include "test_util.h"

namespace evseq {
namespace {

using testing::corpus_of;
using testing::tok;
using testing::toks;
using testing::vocab_of;

Distribution theta() {
  return Distribution{{{tok("a"), 0.20}, {tok("b"), 0.50}, {tok("c"), 0.10}, {tok("d"), 0.10}}};
}

// Normalized: b 5/9, a 2/9, c 1/9, d 1/9. Reversal gives b and a the two
// smallest masses and c/d the two largest, in either order.
TEST(Down, WorkedExample) {
  Rng rng(1);
  Distribution d = transform_down(theta(), rng);
  EXPECT_NEAR(d.prob(tok("a")), 1.0 / 9.0, 1e-12);
  EXPECT_NEAR(d.prob(tok("b")), 1.0 / 9.0, 1e-12);
  const double c = d.prob(tok("c")), dd = d.prob(tok("d"));
  EXPECT_TRUE((std::abs(c - 5.0 / 9.0) < 1e-12 && std::abs(dd - 2.0 / 9.0) < 1e-12) ||
              (std::abs(c - 2.0 / 9.0) < 1e-12 && std::abs(dd - 5.0 / 9.0) < 1e-12));
  EXPECT_NEAR(d.total(), 1.0, 1e-12);
  // Entry order is preserved.
  EXPECT_EQ(d.entries[0].first, tok("a"));
  EXPECT_EQ(d.entries[3].first, tok("d"));
}

TEST(Down, TiesAreBrokenUniformly) {
  Rng rng(2024);
  int c_high = 0;
  const int trials = 1000;
  for (int i = 0; i < trials; ++i) {
    if (transform_down(theta(), rng).prob(tok("c")) > 0.5) ++c_high;
  }
  EXPECT_NEAR(c_high / double(trials), 0.5, 0.05);
}

TEST(Down, DistinctValuesAreDeterministic) {
  Distribution up{{{tok("a"), 0.6}, {tok("b"), 0.3}, {tok("c"), 0.1}}};
  Rng r1(1), r2(99);
  Distribution d1 = transform_down(up, r1), d2 = transform_down(up, r2);
  EXPECT_DOUBLE_EQ(d1.prob(tok("a")), 0.1);
  EXPECT_DOUBLE_EQ(d1.prob(tok("b")), 0.3);
  EXPECT_DOUBLE_EQ(d1.prob(tok("c")), 0.6);
  EXPECT_EQ(d1.entries, d2.entries);
  Rng r3(0);
  Distribution single{{{tok("a"), 2.0}}};
  EXPECT_DOUBLE_EQ(transform_down(single, r3).prob(tok("a")), 1.0);
  EXPECT_THROW(transform_down(Distribution{}, r3), ModelError);
}

TEST(Strange, MixesUpAndDown) {
  Distribution up{{{tok("a"), 0.6}, {tok("b"), 0.3}, {tok("c"), 0.1}}};
  Rng rng(0);
  Distribution down = transform_down(up, rng);
  Distribution s = transform_strange(up, down, 0.5);
  EXPECT_NEAR(s.prob(tok("a")), 0.35, 1e-12);
  EXPECT_NEAR(s.prob(tok("b")), 0.30, 1e-12);
  EXPECT_NEAR(s.prob(tok("c")), 0.35, 1e-12);
  EXPECT_EQ(transform_strange(up, down, 1.0).entries, up.entries);
  EXPECT_EQ(transform_strange(up, down, 0.0).entries, down.entries);
  EXPECT_THROW(transform_strange(up, down, 1.5), ModelError);
  Distribution other{{{tok("x"), 1.0}, {tok("y"), 0.0}, {tok("z"), 0.0}}};
  EXPECT_THROW(transform_strange(up, other, 0.5), ModelError);
}

TEST(FlavorConfig, Construction) {
  EXPECT_EQ(FlavorConfig::up().flavor(), Flavor::kUp);
  EXPECT_EQ(FlavorConfig::down().lambda(), std::nullopt);
  EXPECT_EQ(FlavorConfig::strange().lambda(), 0.5);
  EXPECT_EQ(FlavorConfig::of(Flavor::kStrange, 0.25, 3).lambda(), 0.25);
  EXPECT_EQ(FlavorConfig::of(Flavor::kStrange, 0.25, 3).rng_seed(), 3u);
  EXPECT_THROW(FlavorConfig::strange(-0.1), RequestError);
  EXPECT_THROW(FlavorConfig::strange(1.1), RequestError);
  for (Flavor f : {Flavor::kUp, Flavor::kDown, Flavor::kStrange}) {
    EXPECT_EQ(parse_flavor(to_string(f)), f);
  }
  EXPECT_EQ(parse_flavor("sideways"), std::nullopt);
}

TEST(Sampling, MatchesDistribution) {
  Distribution d{{{tok("a"), 0.5}, {tok("b"), 0.3}, {tok("c"), 0.2}}};
  Rng rng(11);
  std::map<EventToken, int> hist;
  const int n = 20000;
  for (int i = 0; i < n; ++i) ++hist[sample_from(d, rng)];
  double chi2 = 0.0;
  for (const auto& [t, p] : d.entries) {
    const double e = p * n;
    chi2 += (hist[t] - e) * (hist[t] - e) / e;
  }
  EXPECT_LT(chi2, 13.8);  // df = 2, p = 0.001
}

TEST(Sampling, ZeroMassNeverDrawn) {
  Distribution d{{{tok("a"), 0.0}, {tok("b"), 1.0}, {tok("c"), 0.0}}};
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_from(d, rng), tok("b"));
  EXPECT_THROW(sample_from(Distribution{}, rng), ModelError);
}

TEST(Flavored, BackoffActsOnObservedSuccessors) {
  ModelPair m = train(corpus_of({"A B A B A C"}), vocab_of("A B C D"), 2);
  Rng rng(3);
  auto h = toks("A");
  for (Flavor f : {Flavor::kUp, Flavor::kDown, Flavor::kStrange}) {
    Distribution d = flavored_distribution(m.backoff, FlavorConfig::of(f), h, rng);
    EXPECT_EQ(d.size(), 2u);
    EXPECT_GT(d.prob(tok("B")), 0.0);
    EXPECT_GT(d.prob(tok("C")), 0.0);
    EXPECT_EQ(d.prob(tok("D")), 0.0);
  }
  Distribution up = flavored_distribution(m.backoff, FlavorConfig::up(), h, rng);
  Distribution down = flavored_distribution(m.backoff, FlavorConfig::down(), h, rng);
  EXPECT_GT(up.prob(tok("B")), up.prob(tok("C")));
  EXPECT_LT(down.prob(tok("B")), down.prob(tok("C")));
}

TEST(Flavored, InterpolatedActsOnWholeVocabulary) {
  ModelPair m = train(corpus_of({"A B A B A C"}), vocab_of("A B C D"), 2);
  Rng rng(3);
  for (Flavor f : {Flavor::kUp, Flavor::kDown, Flavor::kStrange}) {
    Distribution d = flavored_distribution(m.interpolated, FlavorConfig::of(f), toks("A"), rng);
    EXPECT_EQ(d.size(), 4u);
    for (const auto& [t, p] : d.entries) EXPECT_GT(p, 0.0);
  }
  Distribution down =
      flavored_distribution(m.interpolated, FlavorConfig::down(), toks("A"), rng);
  // D was never observed, so it is the least likely token and goes first under down.
  for (const auto& t : toks("A B C")) EXPECT_GT(down.prob(tok("D")), down.prob(t));
}

TEST(Flavored, SampleIsReproducible) {
  ModelPair m = train(corpus_of({"A B A B A C", "C A B"}), vocab_of("A B C"), 3);
  Rng r1(8), r2(8);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(sample(m.interpolated, FlavorConfig::strange(0.3), toks("A"), r1),
              sample(m.interpolated, FlavorConfig::strange(0.3), toks("A"), r2));
  }
}

}  // namespace
}  // namespace evseq
