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

#include "tomalign/grid_env.hpp"

#include <sstream>

namespace tomalign {
namespace {

const char* kDirectionNames[] = {"up", "down", "left", "right"};

std::string cell_text(Cell c) {
  return "(" + std::to_string(c.x) + ", " + std::to_string(c.y) + ")";
}

}  // namespace

GridLayout GridLayout::game1() {
  GridLayout l;
  l.width = 3;
  l.height = 3;
  l.start = {Cell{0, 1}, Cell{1, 2}};
  l.goal = {Cell{2, 1}, Cell{1, 0}};
  l.name = "game1";
  return l;
}

GridLayout GridLayout::game2() {
  GridLayout l;
  l.width = 5;
  l.height = 2;
  for (int x = 0; x < 5; ++x) {
    if (x != 2) l.walls.insert(Cell{x, 1});  // only the alcove above center
  }
  l.start = {Cell{0, 0}, Cell{4, 0}};
  l.goal = {Cell{4, 0}, Cell{0, 0}};
  l.name = "game2";
  return l;
}

GridLayout GridLayout::parse(const std::string& text, std::string name) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) rows.push_back(line);
  }
  if (rows.empty()) throw ContractError("grid layout: empty map");

  GridLayout l;
  l.name = std::move(name);
  l.height = static_cast<int>(rows.size());
  l.width = static_cast<int>(rows[0].size());
  bool seen[4] = {false, false, false, false};  // start1, start2, goal1, goal2
  for (int r = 0; r < l.height; ++r) {
    if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != l.width) {
      throw ContractError("grid layout: ragged rows");
    }
    for (int x = 0; x < l.width; ++x) {
      Cell c{x, l.height - 1 - r};  // first row is the top
      char ch = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(x)];
      switch (ch) {
        case '#': l.walls.insert(c); break;
        case '.': break;
        case '1': l.start[0] = c; seen[0] = true; break;
        case '2': l.start[1] = c; seen[1] = true; break;
        case 'A': l.goal[0] = c; seen[2] = true; break;
        case 'B': l.goal[1] = c; seen[3] = true; break;
        case 'X':  // player 1 starts on player 2's goal
          l.start[0] = c; l.goal[1] = c; seen[0] = seen[3] = true; break;
        case 'Y':  // player 2 starts on player 1's goal
          l.start[1] = c; l.goal[0] = c; seen[1] = seen[2] = true; break;
        default:
          throw ContractError(std::string("grid layout: unknown cell '") + ch +
                              "'");
      }
    }
  }
  for (bool s : seen) {
    if (!s) throw ContractError("grid layout: missing start or goal marker");
  }
  l.validate();
  return l;
}

std::string GridLayout::to_text() const {
  std::string out;
  for (int y = height - 1; y >= 0; --y) {
    for (int x = 0; x < width; ++x) {
      Cell c{x, y};
      char ch = '.';
      if (walls.count(c)) ch = '#';
      if (c == goal[0]) ch = 'A';
      if (c == goal[1]) ch = 'B';
      if (c == start[0]) ch = c == goal[1] ? 'X' : '1';
      if (c == start[1]) ch = c == goal[0] ? 'Y' : '2';
      out += ch;
    }
    out += '\n';
  }
  return out;
}

void GridLayout::validate() const {
  if (width <= 0 || height <= 0) throw ContractError("grid layout: empty");
  for (int i = 0; i < 2; ++i) {
    auto idx = static_cast<std::size_t>(i);
    if (!walkable(start[idx])) {
      throw ContractError("grid layout: start not walkable");
    }
    if (!walkable(goal[idx])) {
      throw ContractError("grid layout: goal not walkable");
    }
    if (start[idx] == goal[idx]) {
      throw ContractError("grid layout: start equals own goal");
    }
  }
  if (start[0] == start[1]) throw ContractError("grid layout: shared start");
  if (goal[0] == goal[1]) throw ContractError("grid layout: shared goal");
}

GridEnv::GridEnv(GridLayout layout, int horizon)
    : layout_(std::move(layout)), horizon_(horizon) {
  layout_.validate();
  if (horizon_ <= 0) throw ContractError("grid: horizon must be positive");
}

std::string GridEnv::name() const { return "grid-" + layout_.name; }

EnvState GridEnv::initial_state() const {
  return GridState{{layout_.start[0], layout_.start[1]}, 0};
}

const GridState& GridEnv::unwrap(const EnvState& s) const {
  const auto* g = std::get_if<GridState>(&s);
  if (g == nullptr) throw ContractError("GridEnv: foreign state type");
  return *g;
}

bool GridEnv::at_goals(const GridState& s) const {
  return s.pos[0] == layout_.goal[0] && s.pos[1] == layout_.goal[1];
}

bool GridEnv::is_terminal(const EnvState& s) const {
  const GridState& g = unwrap(s);
  return at_goals(g) || g.t >= horizon_;
}

bool GridEnv::is_success(const EnvState& s) const { return at_goals(unwrap(s)); }

std::vector<ActionId> GridEnv::legal_actions(const EnvState& s,
                                             PlayerId) const {
  if (is_terminal(s)) {
    throw ContractError("GridEnv: no legal actions in a terminal state");
  }
  // All four directions are always selectable; blocked ones resolve to stay.
  return {ActionId{kUp}, ActionId{kDown}, ActionId{kLeft}, ActionId{kRight}};
}

StepOutcome GridEnv::step(const EnvState& s, JointAction a) const {
  const GridState& g = unwrap(s);
  if (is_terminal(s)) throw ContractError("GridEnv: step after episode end");

  std::array<Cell, 2> effective{};
  for (int i = 0; i < 2; ++i) {
    auto idx = static_cast<std::size_t>(i);
    ActionId act = i == 0 ? a.a1 : a.a2;
    if (act.index < 0 || act.index > 3) {
      throw ContractError("GridEnv: illegal action index");
    }
    Cell d = direction_offset(act.index);
    Cell target{g.pos[idx].x + d.x, g.pos[idx].y + d.y};
    Cell partner_goal = layout_.goal[static_cast<std::size_t>(1 - i)];
    if (!layout_.walkable(target) || target == partner_goal) {
      target = g.pos[idx];  // blocked moves resolve to staying
    }
    effective[idx] = target;
  }
  bool collide = effective[0] == effective[1];
  bool swap = effective[0] == g.pos[1] && effective[1] == g.pos[0];
  GridState next = g;
  next.t = g.t + 1;
  if (!collide && !swap) next.pos = effective;

  bool done = at_goals(next);
  return {EnvState{next}, -1.0, done || next.t >= horizon_};
}

std::vector<std::string> GridEnv::action_names(PlayerId) const {
  return {kDirectionNames[0], kDirectionNames[1], kDirectionNames[2],
          kDirectionNames[3]};
}

std::string GridEnv::encode_state_text(const EnvState& s,
                                       PlayerId viewpoint) const {
  const GridState& g = unwrap(s);
  auto me = static_cast<std::size_t>(viewpoint.slot());
  auto other = static_cast<std::size_t>(viewpoint.partner().slot());
  std::ostringstream out;
  out << "You are at " << cell_text(g.pos[me]) << " and your goal is "
      << cell_text(layout_.goal[me]) << ". Your partner is at "
      << cell_text(g.pos[other]) << " and their goal is "
      << cell_text(layout_.goal[other]) << ". Step " << g.t << " of "
      << horizon_ << ".";
  return out.str();
}

}  // namespace tomalign
