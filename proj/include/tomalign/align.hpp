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

#ifndef TOMALIGN_ALIGN_HPP_
#define TOMALIGN_ALIGN_HPP_

#include <random>
#include <span>
#include <vector>

#include "tomalign/tom.hpp"

namespace tomalign {

// The adaptive agent treats each candidate partner order as an expert in an
// online expert-advice problem: every step each hypothetical partner policy
// predicts the partner's action, one prediction is selected, and after the
// partner's actual action is observed every hypothesis is charged 0-1 loss
// for a wrong prediction.
//
// Two selection rules are provided. Follow-the-leader keeps cumulative
// losses and picks the minimizer (ties toward the smallest order). Hedge
// keeps multiplicative weights w <- w * exp(-eta * loss) and samples the
// order from the normalized weights.
enum class ExpertMode { kFtl, kHedge };

inline constexpr int kDefaultNumOrders = 3;

struct ExpertState {
  ExpertMode mode = ExpertMode::kFtl;
  std::vector<double> losses;   // FTL: cumulative 0-1 losses, non-decreasing
  std::vector<double> weights;  // Hedge: starts at 1, stays in (0, 1]
  double eta = 1.0;
  std::mt19937_64 rng{};
  int step = 1;

  int num_orders() const { return static_cast<int>(losses.size()); }
};

ExpertState make_expert_state(ExpertMode mode, std::uint64_t seed = 0,
                              double eta = 1.0,
                              int num_orders = kDefaultNumOrders);

// Leader selection: argmin cumulative loss, ties toward the smallest order.
int ftl_select(const ExpertState& e);

// Charges +1 to every hypothesis whose prediction differs from the observed
// partner action, and advances the step counter. Updates always compare this
// step's predictions with this step's observed action.
ExpertState ftl_update(ExpertState e, std::span<const ActionId> predictions,
                       ActionId actual);

// Normalized weight distribution P over orders.
std::vector<double> hedge_probabilities(const ExpertState& e);

// Samples an order from the normalized weights using the agent's own RNG
// stream; reproducible per seed.
int hedge_select(ExpertState& e);

// Multiplicative update w <- w * exp(-eta * loss) with 0-1 losses, applied
// to every hypothesis (a step where all hypotheses err rescales every weight
// and leaves the normalized distribution unchanged).
ExpertState hedge_update(ExpertState e, std::span<const ActionId> predictions,
                         ActionId actual);

// Candidate partner actions, one per hypothetical partner order, each
// computed independently with the ego agent's own backend and tie rule.
std::vector<ActionId> hypothesize(const Env& env, const EnvState& s,
                                  Backend& backend, const TieBreakRule& tie,
                                  PlayerId ego,
                                  int num_orders = kDefaultNumOrders,
                                  double tie_tolerance = kDefaultTieTolerance);

// One adaptive decision, fully recorded for logging and deferred updates.
// weights_snapshot is the distribution used for this step's selection: the
// normalized weights for Hedge, a one-hot leader indicator for FTL.
struct AtomDecision {
  int chosen_order = 0;
  std::vector<ActionId> hypothesis_predictions;
  ActionId predicted_partner{};
  ActionId ego_action{};
  std::vector<double> weights_snapshot;
};

// Hypothesize, select an order, and best-respond to the selected prediction.
// The loss update is deferred until the partner's actual action is observed;
// pass the returned decision to atom_observe then.
AtomDecision atom_act(ExpertState& e, const Env& env, const EnvState& s,
                      Backend& backend, const TieBreakRule& tie, PlayerId ego,
                      double tie_tolerance = kDefaultTieTolerance);

ExpertState atom_observe(ExpertState e, const AtomDecision& decision,
                         ActionId actual_partner_action);

}  // namespace tomalign

#endif  // TOMALIGN_ALIGN_HPP_
