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

#ifndef TOMALIGN_ENV_HPP_
#define TOMALIGN_ENV_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "tomalign/core.hpp"

namespace tomalign {

// ---------------------------------------------------------------------------
// Environment state payloads. All are immutable value types: hashable,
// equality-comparable, and cheap to copy.
// ---------------------------------------------------------------------------

enum class MatrixMemory { kMemory1, kMemoryN };

// Repeated matrix game state. Memory1 exposes the previous joint action;
// MemoryN exposes cumulative per-action counts per player. The recorded
// history includes one uncoordinated initialization round, so MemoryN counts
// sum to round + 1 per player.
struct MatrixState {
  MatrixMemory mode = MatrixMemory::kMemory1;
  std::array<ActionId, 2> last{};            // Memory1: previous joint action
  std::array<std::array<int, 3>, 2> counts{};  // MemoryN: [player][action]
  int round = 0;

  bool operator==(const MatrixState&) const = default;
};

// Grid cell, x to the right, y upward.
struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

// Movement directions share one published ordering across environments:
// up < down < left < right (< stay, where an environment has it).
inline constexpr int kDirUp = 0;
inline constexpr int kDirDown = 1;
inline constexpr int kDirLeft = 2;
inline constexpr int kDirRight = 3;

Cell direction_offset(int direction);

struct GridState {
  std::array<Cell, 2> pos{};
  int t = 0;
  bool operator==(const GridState&) const = default;
};

enum class Item : std::uint8_t { kNone, kOnion, kPlate, kSoup };

struct PotState {
  int onions = 0;    // 0..3
  int timer = 0;     // cook steps remaining; >0 implies onions == 3
  bool ready = false;  // implies onions == 3 and timer == 0
  bool operator==(const PotState&) const = default;
};

struct OvercookedState {
  std::array<Cell, 2> pos{};
  std::array<Item, 2> held{Item::kNone, Item::kNone};
  PotState pot;
  std::array<Item, 4> counters{Item::kNone, Item::kNone, Item::kNone,
                               Item::kNone};
  int delivered = 0;
  int t = 0;
  bool operator==(const OvercookedState&) const = default;
};

using EnvState = std::variant<MatrixState, GridState, OvercookedState>;

struct StepOutcome {
  EnvState next;
  double reward = 0;  // shared by both players
  bool done = false;
};

std::size_t hash_state(const EnvState& s);

struct StateHash {
  std::size_t operator()(const EnvState& s) const { return hash_state(s); }
};

// ---------------------------------------------------------------------------
// The environment contract. Transitions are deterministic; legal_actions is
// never empty for non-terminal states; step must not be called on terminal
// states. Implementations are immutable after construction, so one instance
// can serve any number of concurrent episodes.
// ---------------------------------------------------------------------------
class Env {
 public:
  virtual ~Env() = default;

  virtual std::string name() const = 0;
  virtual EnvState initial_state() const = 0;
  virtual std::vector<ActionId> legal_actions(const EnvState& s,
                                              PlayerId p) const = 0;
  virtual StepOutcome step(const EnvState& s, JointAction a) const = 0;
  virtual bool is_terminal(const EnvState& s) const = 0;
  // Whether the task objective has been achieved in this state, as opposed
  // to merely running out the step cap.
  virtual bool is_success(const EnvState& s) const = 0;
  virtual int horizon() const = 0;
  virtual double discount() const = 0;

  // Published total ordering of the player's actions; index == ActionId.
  virtual std::vector<std::string> action_names(PlayerId p) const = 0;

  // Canonical natural-language description of the state from the given
  // player's viewpoint. Deterministic; identical states produce byte-identical
  // text; injective on each default environment's reachable states.
  virtual std::string encode_state_text(const EnvState& s,
                                        PlayerId viewpoint) const = 0;

  std::string encode_state_text(const EnvState& s) const {
    return encode_state_text(s, PlayerId::p1());
  }

  std::string action_name(PlayerId p, ActionId a) const {
    return action_names(p).at(static_cast<std::size_t>(a.index));
  }
};

}  // namespace tomalign

#endif  // TOMALIGN_ENV_HPP_
