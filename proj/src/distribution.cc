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

#include "evseq/distribution.h"

#include "evseq/error.h"

namespace evseq {

double Distribution::total() const {
  double sum = 0.0;
  for (const auto& [_, p] : entries) sum += p;
  return sum;
}

double Distribution::prob(const EventToken& token) const {
  for (const auto& [t, p] : entries) {
    if (t == token) return p;
  }
  return 0.0;
}

void Distribution::normalize() {
  const double sum = total();
  if (!(sum > 0.0)) throw ModelError("cannot normalize a distribution with zero mass");
  for (auto& [_, p] : entries) p /= sum;
}

}  // namespace evseq
