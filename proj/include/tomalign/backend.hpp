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

#ifndef TOMALIGN_BACKEND_HPP_
#define TOMALIGN_BACKEND_HPP_

#include <optional>
#include <vector>

#include "tomalign/env.hpp"

namespace tomalign {

// A decision backend scores actions for one player in one state. The same
// recursive-reasoning policies run over any realization: an exact value
// table, a noisy one, a depth-limited search, or a language model served
// over HTTP.
//
// score_given_partner conditions on a fixed partner action;
// score_unconditioned treats the partner as part of the environment (for
// value-table backends: assuming the team completes the joint action
// optimally). Scores are finite and aligned with the environment's published
// action ordering. Backends may keep per-instance mutable state (RNG
// streams, memo tables), so an instance belongs to one agent in one episode.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::vector<ScoredAction> score_unconditioned(const Env& env,
                                                        const EnvState& s,
                                                        PlayerId p) = 0;
  virtual std::vector<ScoredAction> score_given_partner(
      const Env& env, const EnvState& s, PlayerId p,
      ActionId partner_action) = 0;
  virtual double score_joint(const Env& env, const EnvState& s,
                             JointAction a) = 0;

  // Backends that produce an action directly (rather than scores) override
  // this; policies then bypass the scoring path. Returns nullopt otherwise.
  virtual std::optional<ActionId> decide(const Env& env, const EnvState& s,
                                         PlayerId p,
                                         std::optional<ActionId> partner) {
    (void)env;
    (void)s;
    (void)p;
    (void)partner;
    return std::nullopt;
  }
};

}  // namespace tomalign

#endif  // TOMALIGN_BACKEND_HPP_
