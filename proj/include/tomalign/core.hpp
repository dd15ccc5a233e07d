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

#ifndef TOMALIGN_CORE_HPP_
#define TOMALIGN_CORE_HPP_

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

namespace tomalign {

// A precondition or interface contract was violated by the caller.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// State enumeration exceeded the configured capacity.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A joint plan reaching termination does not exist.
class UnreachableGoalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An external decision backend could not be reached after retries.
class BackendUnavailableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One of the two players of a fully cooperative Markov game.
// Index is 1-based; slot() gives the 0-based array position.
class PlayerId {
 public:
  explicit PlayerId(int index) : index_(index) {
    if (index != 1 && index != 2) {
      throw ContractError("PlayerId index must be 1 or 2, got " +
                          std::to_string(index));
    }
  }
  static PlayerId p1() { return PlayerId(1); }
  static PlayerId p2() { return PlayerId(2); }

  int index() const { return index_; }
  int slot() const { return index_ - 1; }
  PlayerId partner() const { return PlayerId(3 - index_); }

  friend bool operator==(PlayerId a, PlayerId b) {
    return a.index_ == b.index_;
  }
  friend bool operator!=(PlayerId a, PlayerId b) { return !(a == b); }

 private:
  int index_;
};

inline PlayerId partner_of(PlayerId p) { return p.partner(); }

// Index into an environment- and player-specific ordered action list.
// The ordering is total and published by the environment; lexicographic
// tie-breaking relies on it.
struct ActionId {
  int index = 0;
  auto operator<=>(const ActionId&) const = default;
};

struct JointAction {
  ActionId a1;  // player 1 component
  ActionId a2;  // player 2 component

  ActionId by(PlayerId p) const { return p.index() == 1 ? a1 : a2; }

  static JointAction from(PlayerId p, ActionId own, ActionId partner) {
    return p.index() == 1 ? JointAction{own, partner}
                          : JointAction{partner, own};
  }

  bool operator==(const JointAction&) const = default;
};

// How to pick among actions whose scores tie within tolerance.
// Lexicographic picks the smallest ActionId. SeededRandom picks a
// uniformly pseudo-random member, reproducible from its seed (the choice
// is a pure function of the seed and the tie set).
struct TieBreakRule {
  enum class Kind { kLexicographic, kSeededRandom };
  Kind kind = Kind::kLexicographic;
  std::uint64_t seed = 0;

  static TieBreakRule lexicographic() { return {}; }
  static TieBreakRule seeded_random(std::uint64_t seed) {
    return {Kind::kSeededRandom, seed};
  }
};

inline constexpr double kDefaultTieTolerance = 1e-9;

using ScoredAction = std::pair<ActionId, double>;

// Returns a member of the tie set {a : max - score(a) <= tolerance},
// selected by the rule. Throws ContractError on an empty score list or a
// negative tolerance.
ActionId argmax_with_ties(std::span<const ScoredAction> scores,
                          const TieBreakRule& rule,
                          double tolerance = kDefaultTieTolerance);

// splitmix64: the seed splitter used to derive independent per-replication
// and per-agent RNG streams from one base seed.
std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream);

inline void hash_combine(std::size_t& h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

}  // namespace tomalign

#endif  // TOMALIGN_CORE_HPP_
