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

#include "tomalign/backends.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace tomalign {

// ---------------------------------------------------------------------------
// ExactQBackend
// ---------------------------------------------------------------------------

std::vector<ScoredAction> ExactQBackend::score_unconditioned(
    const Env& env, const EnvState& s, PlayerId p) {
  std::vector<ActionId> own = env.legal_actions(s, p);
  std::vector<ActionId> partner = env.legal_actions(s, p.partner());
  std::vector<ScoredAction> scores;
  scores.reserve(own.size());
  for (ActionId a : own) {
    double value;
    if (reduction_ == Order0Reduction::kOptimistic) {
      value = -std::numeric_limits<double>::infinity();
      for (ActionId b : partner) {
        value = std::max(value,
                         oracle_->lookup(s, JointAction::from(p, a, b)));
      }
    } else {
      value = 0.0;
      for (ActionId b : partner) {
        value += oracle_->lookup(s, JointAction::from(p, a, b));
      }
      value /= static_cast<double>(partner.size());
    }
    scores.emplace_back(a, value);
  }
  return scores;
}

std::vector<ScoredAction> ExactQBackend::score_given_partner(
    const Env& env, const EnvState& s, PlayerId p, ActionId partner_action) {
  std::vector<ActionId> own = env.legal_actions(s, p);
  std::vector<ScoredAction> scores;
  scores.reserve(own.size());
  for (ActionId a : own) {
    scores.emplace_back(a,
                        oracle_->lookup(s, JointAction::from(p, a,
                                                             partner_action)));
  }
  return scores;
}

double ExactQBackend::score_joint(const Env&, const EnvState& s,
                                  JointAction a) {
  return oracle_->lookup(s, a);
}

// ---------------------------------------------------------------------------
// Softmax sampling and the Gumbel-perturbation backend
// ---------------------------------------------------------------------------

ActionId softmax_sample(std::span<const ScoredAction> scores,
                        double temperature, std::mt19937_64& rng) {
  if (scores.empty()) throw ContractError("softmax_sample: empty score list");
  if (temperature < 0) {
    throw ContractError("softmax_sample: negative temperature");
  }
  if (temperature == 0.0) {
    return argmax_with_ties(scores, TieBreakRule::lexicographic());
  }
  double max_score = scores[0].second;
  for (const auto& [a, v] : scores) max_score = std::max(max_score, v);
  std::vector<double> cumulative;
  cumulative.reserve(scores.size());
  double total = 0;
  for (const auto& [a, v] : scores) {
    total += std::exp((v - max_score) / temperature);
    cumulative.push_back(total);
  }
  std::uniform_real_distribution<double> uniform(0.0, total);
  double r = uniform(rng);
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    if (r < cumulative[i]) return scores[i].first;
  }
  return scores.back().first;
}

SoftmaxBackend::SoftmaxBackend(std::unique_ptr<Backend> inner,
                               SoftmaxConfig config)
    : inner_(std::move(inner)),
      temperature_(config.temperature),
      rng_(config.seed) {
  if (temperature_ < 0) {
    throw ContractError("SoftmaxBackend: negative temperature");
  }
}

std::vector<ScoredAction> SoftmaxBackend::perturb(
    std::vector<ScoredAction> scores) {
  if (temperature_ == 0.0) return scores;
  // The rationality knob is scale-free: noise is calibrated to the score
  // range, so a positive affine rescaling of the backend's scores leaves
  // the decision distribution unchanged. Equal-score sets (range 0) are
  // plain ties and any noise scale breaks them uniformly.
  double lo = scores[0].second, hi = scores[0].second;
  for (const auto& [a, v] : scores) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double range = hi - lo;
  double scale = temperature_ * (range > 0 ? range : 1.0);
  std::uniform_real_distribution<double> uniform(
      std::numeric_limits<double>::min(), 1.0);
  for (auto& [a, v] : scores) {
    double gumbel = -std::log(-std::log(uniform(rng_)));
    v += scale * gumbel;
  }
  return scores;
}

std::vector<ScoredAction> SoftmaxBackend::score_unconditioned(
    const Env& env, const EnvState& s, PlayerId p) {
  return perturb(inner_->score_unconditioned(env, s, p));
}

std::vector<ScoredAction> SoftmaxBackend::score_given_partner(
    const Env& env, const EnvState& s, PlayerId p, ActionId partner_action) {
  return perturb(inner_->score_given_partner(env, s, p, partner_action));
}

double SoftmaxBackend::score_joint(const Env& env, const EnvState& s,
                                   JointAction a) {
  return inner_->score_joint(env, s, a);
}

// ---------------------------------------------------------------------------
// HeuristicSearchBackend
// ---------------------------------------------------------------------------

HeuristicSearchBackend::HeuristicSearchBackend(SearchConfig config)
    : config_(config) {
  if (config_.depth < 1) {
    throw ContractError("HeuristicSearchBackend: depth must be >= 1");
  }
}

const OvercookedEnv& HeuristicSearchBackend::kitchen(const Env& env) const {
  const auto* k = dynamic_cast<const OvercookedEnv*>(&env);
  if (k == nullptr) {
    throw ContractError("HeuristicSearchBackend: kitchen environments only");
  }
  return *k;
}

void HeuristicSearchBackend::ensure_distance_fields(const OvercookedEnv& env) {
  if (fields_env_ == &env) return;
  fields_env_ = &env;
  distance_fields_.clear();
  const OvercookedLayout& layout = env.layout();
  constexpr int kFar = 1000;
  for (Facility target :
       {Facility::kPot, Facility::kDelivery, Facility::kOnionDispenser,
        Facility::kPlateDispenser, Facility::kCounter}) {
    // Multi-source breadth-first distance over walkable cells toward bumping
    // range of the facility kind. Partner blocking is ignored; this is
    // shaping, not planning.
    std::vector<int> field(
        static_cast<std::size_t>(layout.width * layout.height), kFar);
    auto at = [&](Cell c) -> int& {
      return field[static_cast<std::size_t>(c.y * layout.width + c.x)];
    };
    std::deque<Cell> queue;
    for (int y = 0; y < layout.height; ++y) {
      for (int x = 0; x < layout.width; ++x) {
        Cell c{x, y};
        if (!layout.walkable(c)) continue;
        for (int d = 0; d < 4; ++d) {
          Cell off = direction_offset(d);
          Cell n{c.x + off.x, c.y + off.y};
          if (layout.facility_at(n) == target) {
            at(c) = 1;  // one bump away
            queue.push_back(c);
            break;
          }
        }
      }
    }
    while (!queue.empty()) {
      Cell c = queue.front();
      queue.pop_front();
      for (int d = 0; d < 4; ++d) {
        Cell off = direction_offset(d);
        Cell n{c.x + off.x, c.y + off.y};
        if (layout.walkable(n) && at(n) > at(c) + 1) {
          at(n) = at(c) + 1;
          queue.push_back(n);
        }
      }
    }
    distance_fields_[static_cast<int>(target)] = std::move(field);
  }
}

int HeuristicSearchBackend::travel_distance(const OvercookedEnv& env,
                                            Cell from, Facility target) {
  ensure_distance_fields(env);
  const std::vector<int>& field = distance_fields_.at(static_cast<int>(target));
  return field[static_cast<std::size_t>(from.y * env.layout().width + from.x)];
}

int HeuristicSearchBackend::cook_task_distance(const OvercookedEnv& env,
                                               const OvercookedState& s,
                                               int cook) {
  auto idx = static_cast<std::size_t>(cook);
  Cell pos = s.pos[idx];
  bool pot_accepts = s.pot.onions < OvercookedEnv::kPotCapacity &&
                     s.pot.timer == 0 && !s.pot.ready;
  bool pot_busy = s.pot.timer > 0 || s.pot.ready;
  // Only items in hands count toward the team's fetch obligations; items
  // parked on counters still need a courier.
  int onions_in_hand = 0;
  int plates_in_hand = 0;
  bool soup_on_counter = false;
  for (Item it : s.held) {
    if (it == Item::kOnion) ++onions_in_hand;
    if (it == Item::kPlate) ++plates_in_hand;
  }
  for (Item it : s.counters) {
    if (it == Item::kSoup) soup_on_counter = true;
  }

  switch (s.held[idx]) {
    case Item::kSoup:
      return travel_distance(env, pos, Facility::kDelivery);
    case Item::kPlate:
      if (pot_busy) return travel_distance(env, pos, Facility::kPot);
      return travel_distance(env, pos, Facility::kCounter);
    case Item::kOnion:
      if (pot_accepts) return travel_distance(env, pos, Facility::kPot);
      return travel_distance(env, pos, Facility::kCounter);
    case Item::kNone:
      if (soup_on_counter) {
        return travel_distance(env, pos, Facility::kCounter);
      }
      if (pot_busy && plates_in_hand == 0) {
        return travel_distance(env, pos, Facility::kPlateDispenser);
      }
      if (pot_accepts &&
          s.pot.onions + onions_in_hand < OvercookedEnv::kPotCapacity) {
        return travel_distance(env, pos, Facility::kOnionDispenser);
      }
      return 0;  // nothing useful to fetch; idling is free
  }
  return 0;
}

double HeuristicSearchBackend::potential(const OvercookedEnv& env,
                                         const OvercookedState& s) {
  double phi = config_.delivered_weight * s.delivered +
               config_.ready_weight * (s.pot.ready ? 1.0 : 0.0) +
               config_.onion_weight * s.pot.onions -
               static_cast<double>(s.t);

  // Plates only earn credit while the pot is actually cooking: once the
  // soup is ready the plate's value is realized by converting it, and while
  // the pot is filling a plate is clutter.
  auto item_credit = [&](Item it) {
    switch (it) {
      case Item::kOnion: return kOnionCredit;
      case Item::kPlate: return s.pot.timer > 0 ? kPlateCredit : 0.0;
      case Item::kSoup: return kSoupCredit;
      case Item::kNone: return 0.0;
    }
    return 0.0;
  };
  // Parked items earn half credit: progress is preserved but dumping work on
  // a counter is never better than carrying it onward.
  for (Item it : s.held) phi += item_credit(it);
  for (Item it : s.counters) phi += 0.5 * item_credit(it);

  for (int cook = 0; cook < 2; ++cook) {
    phi -= config_.distance_weight * cook_task_distance(env, s, cook);
  }
  return phi;
}

// Best achievable sum of potentials over the next `depth` states. Summing
// along the path (rather than scoring the leaf alone) makes postponing
// progress strictly worse than making it now, even when the window has
// slack.
double HeuristicSearchBackend::lookahead_value(const OvercookedEnv& env,
                                               const EnvState& s, int depth) {
  if (depth <= 0) return 0.0;
  const auto& state = std::get<OvercookedState>(s);
  if (env.is_terminal(s)) return depth * potential(env, state);
  MemoKey key{s, depth};
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;

  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      StepOutcome out = env.step(s, JointAction{ActionId{i}, ActionId{j}});
      const auto& next = std::get<OvercookedState>(out.next);
      best = std::max(best, potential(env, next) +
                                lookahead_value(env, out.next, depth - 1));
    }
  }
  memo_.emplace(key, best);
  return best;
}

std::vector<ScoredAction> HeuristicSearchBackend::score(
    const Env& env_base, const EnvState& s, PlayerId p,
    std::optional<ActionId> partner_action) {
  const OvercookedEnv& env = kitchen(env_base);
  if (env.is_terminal(s)) {
    throw ContractError("HeuristicSearchBackend: terminal state");
  }
  std::vector<ActionId> own = env.legal_actions(s, p);
  std::vector<ActionId> partner = env.legal_actions(s, p.partner());
  std::vector<ScoredAction> scores;
  scores.reserve(own.size());
  for (ActionId a : own) {
    // Conditioned: the partner's first move is pinned. Unconditioned: the
    // partner's first move is averaged out (order-0 reasoning treats the
    // partner as background noise rather than a cooperator).
    double best = -std::numeric_limits<double>::infinity();
    double mean = 0;
    for (ActionId b : partner) {
      if (partner_action && !(b == *partner_action)) continue;
      StepOutcome out = env.step(s, JointAction::from(p, a, b));
      const auto& next = std::get<OvercookedState>(out.next);
      double v = potential(env, next) +
                 lookahead_value(env, out.next, config_.depth - 1);
      best = std::max(best, v);
      mean += v;
    }
    if (partner_action) {
      scores.emplace_back(a, best);
    } else {
      scores.emplace_back(a, mean / static_cast<double>(partner.size()));
    }
  }
  return scores;
}

std::vector<ScoredAction> HeuristicSearchBackend::score_unconditioned(
    const Env& env, const EnvState& s, PlayerId p) {
  return score(env, s, p, std::nullopt);
}

std::vector<ScoredAction> HeuristicSearchBackend::score_given_partner(
    const Env& env, const EnvState& s, PlayerId p, ActionId partner_action) {
  return score(env, s, p, partner_action);
}

double HeuristicSearchBackend::score_joint(const Env& env_base,
                                           const EnvState& s, JointAction a) {
  const OvercookedEnv& env = kitchen(env_base);
  if (env.is_terminal(s)) {
    throw ContractError("HeuristicSearchBackend: terminal state");
  }
  StepOutcome out = env.step(s, a);
  const auto& next = std::get<OvercookedState>(out.next);
  return potential(env, next) +
         lookahead_value(env, out.next, config_.depth - 1);
}

}  // namespace tomalign
