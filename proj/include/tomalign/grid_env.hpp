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

#ifndef TOMALIGN_GRID_ENV_HPP_
#define TOMALIGN_GRID_ENV_HPP_

#include <set>
#include <string>
#include <vector>

#include "tomalign/env.hpp"

namespace tomalign {

// A two-player navigation layout. Cells outside [0,width) x [0,height) or in
// walls are not walkable. Each player must reach its own goal; a player may
// start on the partner's goal but may never move into it.
struct GridLayout {
  int width = 0;
  int height = 0;
  std::set<Cell> walls;
  std::array<Cell, 2> start{};
  std::array<Cell, 2> goal{};
  std::string name = "custom";

  bool walkable(Cell c) const {
    return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height &&
           !walls.count(c);
  }

  // 3x3 open room; the players' shortest paths cross at the center cell.
  static GridLayout game1();
  // Five-cell corridor with a single alcove above the middle; the players
  // must swap ends, so one has to step aside to let the other pass.
  static GridLayout game2();

  // Parses a character map: '#' wall, '.' floor, '1'/'2' player starts,
  // 'A'/'B' player goals, 'X'/'Y' start-on-goal shorthands (player 1 start on
  // player 2's goal / player 2 start on player 1's goal). The first text row
  // is the top of the grid (highest y).
  static GridLayout parse(const std::string& text, std::string name = "custom");

  std::string to_text() const;

  // Structural checks (bounds, distinctness, walkability). Joint
  // reachability is verified separately by the planner at load time.
  void validate() const;
};

// Simultaneous-move navigation. Both players pick one of up/down/left/right;
// a move into a wall, off-grid, or into the partner's goal resolves to
// staying; if both effective targets coincide, or the players would swap
// cells, both stay. Moving into a cell the partner is simultaneously
// vacating is allowed. Shared reward is -1 per step until both players stand
// on their own goals.
class GridEnv : public Env {
 public:
  explicit GridEnv(GridLayout layout, int horizon = 30);

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

  const GridLayout& layout() const { return layout_; }
  bool at_goals(const GridState& s) const;

  static constexpr int kUp = kDirUp;
  static constexpr int kDown = kDirDown;
  static constexpr int kLeft = kDirLeft;
  static constexpr int kRight = kDirRight;

 private:
  const GridState& unwrap(const EnvState& s) const;

  GridLayout layout_;
  int horizon_;
};

}  // namespace tomalign

#endif  // TOMALIGN_GRID_ENV_HPP_
