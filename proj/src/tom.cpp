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

#include "tomalign/tom.hpp"

namespace tomalign {
namespace {

void check_common(const Env& env, const EnvState& s,
                  const TomPolicySpec& spec) {
  if (spec.backend == nullptr) {
    throw ContractError("tom policy: null backend");
  }
  if (spec.order < 0 || spec.order > spec.max_order) {
    throw ContractError("tom policy: order " + std::to_string(spec.order) +
                        " outside [0, " + std::to_string(spec.max_order) +
                        "]");
  }
  if (env.is_terminal(s)) {
    throw ContractError("tom policy: terminal state");
  }
}

}  // namespace

ActionId tom0_act(const Env& env, const EnvState& s,
                  const TomPolicySpec& spec) {
  check_common(env, s, spec);
  if (spec.order != 0) {
    throw ContractError("tom0_act: spec has order " +
                        std::to_string(spec.order));
  }
  if (auto direct = spec.backend->decide(env, s, spec.player, std::nullopt)) {
    return *direct;
  }
  std::vector<ScoredAction> scores =
      spec.backend->score_unconditioned(env, s, spec.player);
  return argmax_with_ties(scores, spec.tie, spec.tie_tolerance);
}

Belief predict_partner(const Env& env, const EnvState& s,
                       const TomPolicySpec& spec) {
  check_common(env, s, spec);
  if (spec.order < 1) {
    throw ContractError("predict_partner: requires order >= 1");
  }
  TomPolicySpec hypothetical = spec;
  hypothetical.player = spec.player.partner();
  hypothetical.order = spec.order - 1;
  return Belief{spec.order, tom_act(env, s, hypothetical)};
}

ActionId tomk_act(const Env& env, const EnvState& s,
                  const TomPolicySpec& spec) {
  check_common(env, s, spec);
  if (spec.order < 1) {
    throw ContractError("tomk_act: requires order >= 1");
  }
  Belief belief = predict_partner(env, s, spec);
  if (auto direct = spec.backend->decide(env, s, spec.player,
                                         belief.predicted_partner_action)) {
    return *direct;
  }
  std::vector<ScoredAction> scores = spec.backend->score_given_partner(
      env, s, spec.player, belief.predicted_partner_action);
  return argmax_with_ties(scores, spec.tie, spec.tie_tolerance);
}

ActionId tom_act(const Env& env, const EnvState& s,
                 const TomPolicySpec& spec) {
  return spec.order == 0 ? tom0_act(env, s, spec) : tomk_act(env, s, spec);
}

}  // namespace tomalign
