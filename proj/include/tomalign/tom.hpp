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

#ifndef TOMALIGN_TOM_HPP_
#define TOMALIGN_TOM_HPP_

#include "tomalign/backend.hpp"

namespace tomalign {

// A recursive-reasoning policy of a fixed order.
//
// Order 0 ignores the partner and picks the best unconditioned action. Order
// k >= 1 first predicts the partner's action by simulating a hypothetical
// partner of order k-1 (built from the same backend and tie rule — the agent
// has no access to the partner's internals), then best-responds to that
// prediction. Evaluating an order-k policy therefore consults the backend
// exactly k+1 times: k nested predictions plus the final decision.
//
// Beliefs are recomputed fresh from the current state on every call; nothing
// persists across steps.
struct TomPolicySpec {
  PlayerId player;
  int order = 0;
  Backend* backend = nullptr;
  TieBreakRule tie{};
  double tie_tolerance = kDefaultTieTolerance;
  // Reasoning depth supported by this agent; orders above 2 are an
  // experimental extension.
  int max_order = 2;
};

// A point prediction of the partner's next action, produced by an order-k
// policy's nested partner model.
struct Belief {
  int order = 0;
  ActionId predicted_partner_action{};
};

// Order-0 decision: best unconditioned action. Requires spec.order == 0 and
// a non-terminal state.
ActionId tom0_act(const Env& env, const EnvState& s, const TomPolicySpec& spec);

// Predicts the partner's action by running the hypothetical order-(k-1)
// partner policy in the partner's seat. Requires spec.order >= 1.
Belief predict_partner(const Env& env, const EnvState& s,
                       const TomPolicySpec& spec);

// Order-k decision for k >= 1: best response to the predicted partner
// action.
ActionId tomk_act(const Env& env, const EnvState& s, const TomPolicySpec& spec);

// Dispatches to tom0_act or tomk_act by spec.order.
ActionId tom_act(const Env& env, const EnvState& s, const TomPolicySpec& spec);

}  // namespace tomalign

#endif  // TOMALIGN_TOM_HPP_
