// Copyright 2026 The tomalign Authors
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

#include "tomalign/core.hpp"

#include <algorithm>
#include <vector>

namespace tomalign {

std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + stream * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ActionId argmax_with_ties(std::span<const ScoredAction> scores,
                          const TieBreakRule& rule, double tolerance) {
  if (scores.empty()) {
    throw ContractError("argmax_with_ties: empty score list");
  }
  if (tolerance < 0) {
    throw ContractError("argmax_with_ties: negative tolerance");
  }
  double best = scores[0].second;
  for (const auto& [a, s] : scores) best = std::max(best, s);

  std::vector<ActionId> ties;
  for (const auto& [a, s] : scores) {
    if (best - s <= tolerance) ties.push_back(a);
  }
  std::sort(ties.begin(), ties.end());

  if (rule.kind == TieBreakRule::Kind::kLexicographic || ties.size() == 1) {
    return ties.front();
  }
  // Seeded pick: fold the tie set into the seed so the selection is a pure
  // function of (seed, tie set) and reproducible across runs.
  std::uint64_t h = rule.seed;
  for (ActionId a : ties) {
    h = split_seed(h, static_cast<std::uint64_t>(a.index) + 1);
  }
  return ties[h % ties.size()];
}

}  // namespace tomalign
