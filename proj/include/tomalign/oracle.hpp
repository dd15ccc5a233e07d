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

#ifndef TOMALIGN_ORACLE_HPP_
#define TOMALIGN_ORACLE_HPP_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "tomalign/env.hpp"

namespace tomalign {

// Exact joint action values computed by finite-horizon backward induction
// over the reachable state set:
//
//   Q(s, a) = R(s, a) + gamma * max_a' Q(step(s, a).next, a'),
//
// with Q == 0 at terminal states and beyond the horizon. Each state carries
// its own step counter, so every stored entry is valued at the state's own
// remaining horizon. The finished table is immutable and can be shared
// freely across threads.
struct QOracle {
  struct Entry {
    // Values indexed a1.index * num_actions2 + a2.index. Empty for terminal
    // states, where every joint action is worth 0.
    std::vector<double> values;
    int num_actions1 = 0;
    int num_actions2 = 0;
  };

  std::string env_name;
  int horizon = 0;
  double gamma = 1.0;
  std::unordered_map<EnvState, Entry, StateHash> table;
  // Discovery order of the enumeration; fixes the cache file layout.
  std::vector<EnvState> enumeration_order;

  bool contains(const EnvState& s) const { return table.count(s) > 0; }

  // Stored value for a state/joint-action pair. Terminal states yield 0 for
  // any action; a state outside the reachable set is a contract violation.
  double lookup(const EnvState& s, JointAction a) const;

  // Max over all joint actions; 0 for terminal states.
  double max_value(const EnvState& s) const;

  // Joint actions within `tolerance` of the maximum. Non-empty for any
  // stored non-terminal state.
  std::vector<JointAction> optimal_joint_actions(
      const EnvState& s, double tolerance = kDefaultTieTolerance) const;
};

inline constexpr std::size_t kDefaultStateCap = 5'000'000;

// Builds the full table for every state reachable within the horizon.
// Throws CapacityError (naming the count) if the enumeration exceeds
// `state_cap` states.
QOracle compute_joint_q(const Env& env, int horizon, double gamma,
                        std::size_t state_cap = kDefaultStateCap);

// Length of the shortest joint action sequence from the initial state to a
// successful termination, by breadth-first search over joint states. An
// intentionally independent code path from compute_joint_q, kept as a
// cross-check. Throws UnreachableGoalError when no sequence exists within
// the horizon.
int optimal_joint_time(const Env& env);

// Presents any environment under a time-minimization objective: shared
// reward -1 per step, no discounting. Grid and kitchen environments already
// use this objective natively; the wrapper lets value tables and search
// compare completion times on any environment.
class TimeCostView : public Env {
 public:
  explicit TimeCostView(const Env& inner) : inner_(inner) {}

  std::string name() const override { return inner_.name() + "-timecost"; }
  EnvState initial_state() const override { return inner_.initial_state(); }
  std::vector<ActionId> legal_actions(const EnvState& s,
                                      PlayerId p) const override {
    return inner_.legal_actions(s, p);
  }
  StepOutcome step(const EnvState& s, JointAction a) const override {
    StepOutcome out = inner_.step(s, a);
    out.reward = -1.0;
    return out;
  }
  bool is_terminal(const EnvState& s) const override {
    return inner_.is_terminal(s);
  }
  bool is_success(const EnvState& s) const override {
    return inner_.is_success(s);
  }
  int horizon() const override { return inner_.horizon(); }
  double discount() const override { return 1.0; }
  std::vector<std::string> action_names(PlayerId p) const override {
    return inner_.action_names(p);
  }
  std::string encode_state_text(const EnvState& s,
                                PlayerId viewpoint) const override {
    return inner_.encode_state_text(s, viewpoint);
  }

 private:
  const Env& inner_;
};

// Plain-text table cache, one line per state keyed by the canonical state
// text. Readable for inspection and reloadable against the same environment.
void save_q_cache(const QOracle& oracle, const Env& env, std::ostream& out);
QOracle load_q_cache(const Env& env, std::istream& in,
                     std::size_t state_cap = kDefaultStateCap);
void save_q_cache_file(const QOracle& oracle, const Env& env,
                       const std::string& path);
QOracle load_q_cache_file(const Env& env, const std::string& path);

}  // namespace tomalign

#endif  // TOMALIGN_ORACLE_HPP_
