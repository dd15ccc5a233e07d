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

#include "tomalign/overcooked_env.hpp"

#include <algorithm>
#include <sstream>

namespace tomalign {
namespace {

const char* kActionNames[] = {"up", "down", "left", "right", "stay"};

std::string cell_text(Cell c) {
  return "(" + std::to_string(c.x) + ", " + std::to_string(c.y) + ")";
}

char facility_char(Facility f) {
  switch (f) {
    case Facility::kWall: return '#';
    case Facility::kPot: return 'P';
    case Facility::kDelivery: return 'D';
    case Facility::kOnionDispenser: return 'O';
    case Facility::kPlateDispenser: return 'L';
    case Facility::kCounter: return 'C';
    case Facility::kNone: return '.';
  }
  return '?';
}

}  // namespace

std::string item_name(Item item) {
  switch (item) {
    case Item::kNone: return "nothing";
    case Item::kOnion: return "an onion";
    case Item::kPlate: return "a plate";
    case Item::kSoup: return "a soup";
  }
  return "?";
}

bool OvercookedLayout::walkable(Cell c) const {
  return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height &&
         !facilities.count(c);
}

Facility OvercookedLayout::facility_at(Cell c) const {
  auto it = facilities.find(c);
  return it == facilities.end() ? Facility::kNone : it->second;
}

std::optional<int> OvercookedLayout::counter_index(Cell c) const {
  auto it = std::find(counter_cells.begin(), counter_cells.end(), c);
  if (it == counter_cells.end()) return std::nullopt;
  return static_cast<int>(it - counter_cells.begin());
}

OvercookedLayout OvercookedLayout::standard() {
  return parse(
      "##CPC##\n"
      "O.....O\n"
      "L.1.2.L\n"
      "##CDC##\n");
}

OvercookedLayout OvercookedLayout::parse(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) rows.push_back(line);
  }
  if (rows.empty()) throw ContractError("kitchen layout: empty map");

  OvercookedLayout l;
  l.height = static_cast<int>(rows.size());
  l.width = static_cast<int>(rows[0].size());
  bool seen1 = false, seen2 = false;
  for (int r = 0; r < l.height; ++r) {
    if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != l.width) {
      throw ContractError("kitchen layout: ragged rows");
    }
    for (int x = 0; x < l.width; ++x) {
      Cell c{x, l.height - 1 - r};
      char ch = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(x)];
      switch (ch) {
        case '.': break;
        case '#': l.facilities[c] = Facility::kWall; break;
        case 'P': l.facilities[c] = Facility::kPot; break;
        case 'D': l.facilities[c] = Facility::kDelivery; break;
        case 'O': l.facilities[c] = Facility::kOnionDispenser; break;
        case 'L': l.facilities[c] = Facility::kPlateDispenser; break;
        case 'C':
          l.facilities[c] = Facility::kCounter;
          l.counter_cells.push_back(c);
          break;
        case '1': l.start[0] = c; seen1 = true; break;
        case '2': l.start[1] = c; seen2 = true; break;
        default:
          throw ContractError(std::string("kitchen layout: unknown cell '") +
                              ch + "'");
      }
    }
  }
  if (!seen1 || !seen2) {
    throw ContractError("kitchen layout: missing start markers");
  }
  std::sort(l.counter_cells.begin(), l.counter_cells.end());
  l.validate();
  return l;
}

std::string OvercookedLayout::to_text() const {
  std::string out;
  for (int y = height - 1; y >= 0; --y) {
    for (int x = 0; x < width; ++x) {
      Cell c{x, y};
      char ch = facility_char(facility_at(c));
      if (c == start[0]) ch = '1';
      if (c == start[1]) ch = '2';
      out += ch;
    }
    out += '\n';
  }
  return out;
}

void OvercookedLayout::validate() const {
  int pots = 0, deliveries = 0, onions = 0, plates = 0, counters = 0;
  for (const auto& [cell, f] : facilities) {
    switch (f) {
      case Facility::kPot: ++pots; break;
      case Facility::kDelivery: ++deliveries; break;
      case Facility::kOnionDispenser: ++onions; break;
      case Facility::kPlateDispenser: ++plates; break;
      case Facility::kCounter: ++counters; break;
      default: break;
    }
  }
  if (pots != 1 || deliveries != 1 || onions != 2 || plates != 2 ||
      counters != 4) {
    throw ContractError(
        "kitchen layout: facility counts must be 1 pot, 1 delivery, 2 onion "
        "dispensers, 2 plate dispensers, 4 counters");
  }
  // The layout must be mirror-symmetric about its vertical axis.
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      Cell c{x, y};
      Cell m{width - 1 - x, y};
      if (facility_at(c) != facility_at(m)) {
        throw ContractError("kitchen layout: not mirror-symmetric");
      }
    }
  }
  if (!walkable(start[0]) || !walkable(start[1]) || start[0] == start[1]) {
    throw ContractError("kitchen layout: bad start cells");
  }
  Cell mirrored{width - 1 - start[0].x, start[0].y};
  if (mirrored != start[1]) {
    throw ContractError("kitchen layout: starts must be mirrored");
  }
}

OvercookedEnv::OvercookedEnv(OvercookedLayout layout, int horizon)
    : layout_(std::move(layout)), horizon_(horizon) {
  layout_.validate();
  if (horizon_ <= 0) throw ContractError("kitchen: horizon must be positive");
}

std::string OvercookedEnv::name() const { return "overcooked"; }

EnvState OvercookedEnv::initial_state() const {
  OvercookedState s;
  s.pos = {layout_.start[0], layout_.start[1]};
  return s;
}

const OvercookedState& OvercookedEnv::unwrap(const EnvState& s) const {
  const auto* o = std::get_if<OvercookedState>(&s);
  if (o == nullptr) throw ContractError("OvercookedEnv: foreign state type");
  return *o;
}

bool OvercookedEnv::is_terminal(const EnvState& s) const {
  const OvercookedState& o = unwrap(s);
  return o.delivered >= 1 || o.t >= horizon_;
}

bool OvercookedEnv::is_success(const EnvState& s) const {
  return unwrap(s).delivered >= 1;
}

std::vector<ActionId> OvercookedEnv::legal_actions(const EnvState& s,
                                                   PlayerId) const {
  if (is_terminal(s)) {
    throw ContractError("OvercookedEnv: no legal actions in a terminal state");
  }
  return {ActionId{kUp}, ActionId{kDown}, ActionId{kLeft}, ActionId{kRight},
          ActionId{kStay}};
}

StepOutcome OvercookedEnv::step(const EnvState& s, JointAction a) const {
  const OvercookedState& cur = unwrap(s);
  if (is_terminal(s)) {
    throw ContractError("OvercookedEnv: step after episode end");
  }

  OvercookedState next = cur;
  bool was_cooking = cur.pot.timer > 0;

  // Resolve movement. Bumping a facility keeps the cook in place and queues
  // an interaction; wall and off-grid moves just keep the cook in place.
  std::array<Cell, 2> effective{};
  std::array<std::optional<Cell>, 2> bumped{};
  for (int i = 0; i < 2; ++i) {
    auto idx = static_cast<std::size_t>(i);
    ActionId act = i == 0 ? a.a1 : a.a2;
    if (act.index < 0 || act.index > kStay) {
      throw ContractError("OvercookedEnv: illegal action index");
    }
    if (act.index == kStay) {
      effective[idx] = cur.pos[idx];
      continue;
    }
    Cell d = direction_offset(act.index);
    Cell target{cur.pos[idx].x + d.x, cur.pos[idx].y + d.y};
    if (layout_.walkable(target)) {
      effective[idx] = target;
    } else {
      effective[idx] = cur.pos[idx];
      Facility f = layout_.facility_at(target);
      if (f != Facility::kNone && f != Facility::kWall) bumped[idx] = target;
    }
  }
  bool collide = effective[0] == effective[1];
  bool swap = effective[0] == cur.pos[1] && effective[1] == cur.pos[0];
  if (!collide && !swap) next.pos = effective;

  // Interactions, player 1 first when both bump the same facility.
  for (int i = 0; i < 2; ++i) {
    auto idx = static_cast<std::size_t>(i);
    if (!bumped[idx]) continue;
    Cell cell = *bumped[idx];
    Item& held = next.held[idx];
    switch (layout_.facility_at(cell)) {
      case Facility::kOnionDispenser:
        if (held == Item::kNone) held = Item::kOnion;
        break;
      case Facility::kPlateDispenser:
        if (held == Item::kNone) held = Item::kPlate;
        break;
      case Facility::kPot:
        if (held == Item::kOnion && next.pot.onions < kPotCapacity &&
            next.pot.timer == 0 && !next.pot.ready) {
          held = Item::kNone;
          next.pot.onions += 1;
          if (next.pot.onions == kPotCapacity) next.pot.timer = kCookTime;
        } else if (held == Item::kPlate && next.pot.ready) {
          held = Item::kSoup;
          next.pot = PotState{};
        }
        break;
      case Facility::kDelivery:
        if (held == Item::kSoup) {
          held = Item::kNone;
          next.delivered += 1;
        }
        break;
      case Facility::kCounter: {
        int c = *layout_.counter_index(cell);
        auto cidx = static_cast<std::size_t>(c);
        if (held != Item::kNone && next.counters[cidx] == Item::kNone) {
          next.counters[cidx] = held;
          held = Item::kNone;
        } else if (held == Item::kNone && next.counters[cidx] != Item::kNone) {
          held = next.counters[cidx];
          next.counters[cidx] = Item::kNone;
        }
        break;
      }
      default:
        break;
    }
  }

  // The pot only ticks on steps where it was already cooking, so the step
  // that deposits the third onion ends with the full timer.
  if (was_cooking && next.pot.timer > 0) {
    next.pot.timer -= 1;
    if (next.pot.timer == 0) next.pot.ready = true;
  }

  next.t = cur.t + 1;
  bool done = next.delivered >= 1 || next.t >= horizon_;
  return {EnvState{next}, -1.0, done};
}

std::vector<std::string> OvercookedEnv::action_names(PlayerId) const {
  return {kActionNames[0], kActionNames[1], kActionNames[2], kActionNames[3],
          kActionNames[4]};
}

std::string OvercookedEnv::encode_state_text(const EnvState& s,
                                             PlayerId viewpoint) const {
  const OvercookedState& o = unwrap(s);
  auto me = static_cast<std::size_t>(viewpoint.slot());
  auto other = static_cast<std::size_t>(viewpoint.partner().slot());
  std::ostringstream out;
  out << "You are at " << cell_text(o.pos[me]) << " holding "
      << item_name(o.held[me]) << ". Your partner is at "
      << cell_text(o.pos[other]) << " holding " << item_name(o.held[other])
      << ". ";
  if (o.pot.ready) {
    out << "The pot holds finished soup.";
  } else if (o.pot.timer > 0) {
    out << "The pot is cooking; " << o.pot.timer << " steps remain.";
  } else {
    out << "The pot contains " << o.pot.onions
        << (o.pot.onions == 1 ? " onion." : " onions.");
  }
  out << " Counters:";
  for (std::size_t i = 0; i < layout_.counter_cells.size(); ++i) {
    out << (i == 0 ? " " : ", ") << cell_text(layout_.counter_cells[i]) << " ";
    out << (o.counters[i] == Item::kNone ? "empty"
                                         : "holds " + item_name(o.counters[i]));
  }
  out << ". Deliveries: " << o.delivered << ". Step " << o.t << " of "
      << horizon_ << ".";
  return out.str();
}

}  // namespace tomalign
