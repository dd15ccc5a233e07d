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

#include "tomalign/env.hpp"

namespace tomalign {
namespace {

std::size_t hash_matrix(const MatrixState& s) {
  std::size_t h = static_cast<std::size_t>(s.mode) + 1;
  hash_combine(h, static_cast<std::size_t>(s.round));
  hash_combine(h, static_cast<std::size_t>(s.last[0].index));
  hash_combine(h, static_cast<std::size_t>(s.last[1].index));
  for (const auto& per_player : s.counts) {
    for (int c : per_player) hash_combine(h, static_cast<std::size_t>(c));
  }
  return h;
}

std::size_t hash_cell(Cell c) {
  std::size_t h = static_cast<std::size_t>(c.x) + 13;
  hash_combine(h, static_cast<std::size_t>(c.y));
  return h;
}

std::size_t hash_grid(const GridState& s) {
  std::size_t h = 0x67726964;
  hash_combine(h, hash_cell(s.pos[0]));
  hash_combine(h, hash_cell(s.pos[1]));
  hash_combine(h, static_cast<std::size_t>(s.t));
  return h;
}

std::size_t hash_overcooked(const OvercookedState& s) {
  std::size_t h = 0x636f6f6b;
  hash_combine(h, hash_cell(s.pos[0]));
  hash_combine(h, hash_cell(s.pos[1]));
  hash_combine(h, static_cast<std::size_t>(s.held[0]));
  hash_combine(h, static_cast<std::size_t>(s.held[1]));
  hash_combine(h, static_cast<std::size_t>(s.pot.onions));
  hash_combine(h, static_cast<std::size_t>(s.pot.timer));
  hash_combine(h, static_cast<std::size_t>(s.pot.ready));
  for (Item it : s.counters) hash_combine(h, static_cast<std::size_t>(it));
  hash_combine(h, static_cast<std::size_t>(s.delivered));
  hash_combine(h, static_cast<std::size_t>(s.t));
  return h;
}

}  // namespace

Cell direction_offset(int direction) {
  switch (direction) {
    case kDirUp: return Cell{0, 1};
    case kDirDown: return Cell{0, -1};
    case kDirLeft: return Cell{-1, 0};
    case kDirRight: return Cell{1, 0};
    default: throw ContractError("direction_offset: unknown direction");
  }
}

std::size_t hash_state(const EnvState& s) {
  std::size_t h = s.index();
  std::visit(
      [&h](const auto& payload) {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, MatrixState>) {
          hash_combine(h, hash_matrix(payload));
        } else if constexpr (std::is_same_v<T, GridState>) {
          hash_combine(h, hash_grid(payload));
        } else {
          hash_combine(h, hash_overcooked(payload));
        }
      },
      s);
  return h;
}

}  // namespace tomalign
