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

#ifndef TOMALIGN_MATRIX_ENV_HPP_
#define TOMALIGN_MATRIX_ENV_HPP_

#include <string>
#include <vector>

#include "tomalign/env.hpp"

namespace tomalign {

// Repeated symmetry-breaking matrix game: both players receive 5 points when
// their options differ and 0 when they match, for 15 rounds. Episodes start
// from a recorded uncoordinated round (both picked the first option), so that
// success cannot come from lucky first moves. Actions are named A, B (and C
// in the 3-action variant); each round's payoff is independent of history
// (discount 0), memory only shapes the state encodings.
class MatrixEnv : public Env {
 public:
  static constexpr int kRounds = 15;
  static constexpr double kCoordinationReward = 5.0;

  MatrixEnv(MatrixMemory memory, int num_actions);

  std::string name() const override;
  EnvState initial_state() const override;
  std::vector<ActionId> legal_actions(const EnvState& s,
                                      PlayerId p) const override;
  StepOutcome step(const EnvState& s, JointAction a) const override;
  bool is_terminal(const EnvState& s) const override;
  bool is_success(const EnvState& s) const override;
  int horizon() const override { return kRounds; }
  double discount() const override { return 0.0; }
  std::vector<std::string> action_names(PlayerId p) const override;
  std::string encode_state_text(const EnvState& s,
                                PlayerId viewpoint) const override;
  using Env::encode_state_text;

  MatrixMemory memory() const { return memory_; }
  int num_actions() const { return num_actions_; }

 private:
  const MatrixState& unwrap(const EnvState& s) const;

  MatrixMemory memory_;
  int num_actions_;
};

}  // namespace tomalign

#endif  // TOMALIGN_MATRIX_ENV_HPP_
