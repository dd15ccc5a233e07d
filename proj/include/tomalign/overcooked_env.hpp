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

#ifndef TOMALIGN_OVERCOOKED_ENV_HPP_
#define TOMALIGN_OVERCOOKED_ENV_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tomalign/env.hpp"

namespace tomalign {

enum class Facility : std::uint8_t {
  kNone,
  kWall,
  kPot,
  kDelivery,
  kOnionDispenser,
  kPlateDispenser,
  kCounter,
};

// Symmetric two-cook kitchen: exactly one pot, one delivery window, two onion
// dispensers, two plate dispensers, and four usable counters, mirror-symmetric
// about the vertical axis. Facilities sit on non-walkable cells and are used
// by bumping into them.
struct OvercookedLayout {
  int width = 0;
  int height = 0;
  std::map<Cell, Facility> facilities;  // includes plain walls
  std::array<Cell, 2> start{};
  std::vector<Cell> counter_cells;  // usable counters, fixed order

  bool walkable(Cell c) const;
  Facility facility_at(Cell c) const;
  std::optional<int> counter_index(Cell c) const;

  // 7x4 ring of walls and facilities around a 5x2 walkable interior.
  static OvercookedLayout standard();

  // Character map: '#' wall, '.' floor, 'P' pot, 'D' delivery, 'O' onion
  // dispenser, 'L' plate dispenser, 'C' counter, '1'/'2' starts. The first
  // text row is the top of the grid.
  static OvercookedLayout parse(const std::string& text);

  std::string to_text() const;
  void validate() const;
};

// Cooperative soup task. Five actions (up/down/left/right/stay); moving into
// a facility cell interacts with it and the cook stays put. The pot cooks
// three onions into soup over 20 steps once the third onion is deposited.
// Shared reward is -1 per step; the episode ends at the first delivery or at
// the step cap.
//
// Interaction effects (bumping a facility with a given held item):
//   empty hand + dispenser            -> pick up that item
//   onion      + pot, <3 onions, idle -> deposit (third onion starts cooking)
//   plate      + pot, soup ready      -> take soup, pot resets to empty
//   soup       + delivery             -> deliver, episode done
//   item       + empty counter        -> place item
//   empty hand + filled counter       -> take item
//   anything else                     -> no effect
// When both cooks bump the same facility in one step, player 1 interacts
// first.
class OvercookedEnv : public Env {
 public:
  static constexpr int kCookTime = 20;
  static constexpr int kPotCapacity = 3;

  explicit OvercookedEnv(OvercookedLayout layout, int horizon = 100);

  std::string name() const override;
  EnvState initial_state() const override;
  std::vector<ActionId> legal_actions(const EnvState& s,
                                      PlayerId p) const override;
  StepOutcome step(const EnvState& s, JointAction a) const override;
  bool is_terminal(const EnvState& s) const override;
  bool is_success(const EnvState& s) const override;
  int horizon() const override { return horizon_; }
  double discount() const override { return 1.0; }
  std::vector<std::string> action_names(PlayerId p) const override;
  std::string encode_state_text(const EnvState& s,
                                PlayerId viewpoint) const override;
  using Env::encode_state_text;

  const OvercookedLayout& layout() const { return layout_; }

  static constexpr int kUp = kDirUp;
  static constexpr int kDown = kDirDown;
  static constexpr int kLeft = kDirLeft;
  static constexpr int kRight = kDirRight;
  static constexpr int kStay = 4;

 private:
  const OvercookedState& unwrap(const EnvState& s) const;

  OvercookedLayout layout_;
  int horizon_;
};

std::string item_name(Item item);

}  // namespace tomalign

#endif  // TOMALIGN_OVERCOOKED_ENV_HPP_
