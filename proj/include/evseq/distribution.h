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

#ifndef EVSEQ_DISTRIBUTION_H_
#define EVSEQ_DISTRIBUTION_H_

#include <utility>
#include <vector>

#include "evseq/event.h"

namespace evseq {

// A categorical distribution over event tokens. Entry order is meaningful
// for sampling (cumulative sums walk the entries in order).
struct Distribution {
  std::vector<std::pair<EventToken, double>> entries;

  double total() const;
  // Probability of `token`, 0 when absent.
  double prob(const EventToken& token) const;
  // Divides by the total. Throws ModelError when the total is not positive.
  void normalize();
  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
};

}  // namespace evseq

#endif  // EVSEQ_DISTRIBUTION_H_
