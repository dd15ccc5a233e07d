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

#include "tomalign/matrix_env.hpp"

#include <sstream>

namespace tomalign {
namespace {
const char* kOptionNames[] = {"A", "B", "C"};
}

MatrixEnv::MatrixEnv(MatrixMemory memory, int num_actions)
    : memory_(memory), num_actions_(num_actions) {
  if (num_actions != 2 && num_actions != 3) {
    throw ContractError("MatrixEnv: num_actions must be 2 or 3, got " +
                        std::to_string(num_actions));
  }
}

std::string MatrixEnv::name() const {
  std::string mem = memory_ == MatrixMemory::kMemory1 ? "m1" : "mN";
  return "matrix-" + mem + "-" + std::to_string(num_actions_);
}

EnvState MatrixEnv::initial_state() const {
  MatrixState s;
  s.mode = memory_;
  s.round = 0;
  // One recorded uncoordinated round: both players picked option A.
  s.last = {ActionId{0}, ActionId{0}};
  if (memory_ == MatrixMemory::kMemoryN) {
    s.counts[0][0] = 1;
    s.counts[1][0] = 1;
  }
  return s;
}

const MatrixState& MatrixEnv::unwrap(const EnvState& s) const {
  const auto* m = std::get_if<MatrixState>(&s);
  if (m == nullptr) throw ContractError("MatrixEnv: foreign state type");
  return *m;
}

bool MatrixEnv::is_terminal(const EnvState& s) const {
  return unwrap(s).round >= kRounds;
}

bool MatrixEnv::is_success(const EnvState& s) const {
  return unwrap(s).round >= kRounds;  // the repeated game always runs out
}

std::vector<ActionId> MatrixEnv::legal_actions(const EnvState& s,
                                               PlayerId) const {
  if (is_terminal(s)) {
    throw ContractError("MatrixEnv: no legal actions in a terminal state");
  }
  std::vector<ActionId> actions;
  actions.reserve(static_cast<std::size_t>(num_actions_));
  for (int i = 0; i < num_actions_; ++i) actions.push_back(ActionId{i});
  return actions;
}

StepOutcome MatrixEnv::step(const EnvState& s, JointAction a) const {
  const MatrixState& m = unwrap(s);
  if (m.round >= kRounds) {
    throw ContractError("MatrixEnv: step after episode end");
  }
  if (a.a1.index < 0 || a.a1.index >= num_actions_ || a.a2.index < 0 ||
      a.a2.index >= num_actions_) {
    throw ContractError("MatrixEnv: illegal action index");
  }
  MatrixState next = m;
  next.round = m.round + 1;
  if (memory_ == MatrixMemory::kMemory1) {
    next.last = {a.a1, a.a2};
  } else {
    // The cumulative-count memory observes only counts; the previous joint
    // action is not part of the state.
    next.counts[0][a.a1.index] += 1;
    next.counts[1][a.a2.index] += 1;
  }
  double reward = a.a1 == a.a2 ? 0.0 : kCoordinationReward;
  return {EnvState{next}, reward, next.round >= kRounds};
}

std::vector<std::string> MatrixEnv::action_names(PlayerId) const {
  std::vector<std::string> names;
  for (int i = 0; i < num_actions_; ++i) names.emplace_back(kOptionNames[i]);
  return names;
}

std::string MatrixEnv::encode_state_text(const EnvState& s,
                                         PlayerId viewpoint) const {
  const MatrixState& m = unwrap(s);
  int me = viewpoint.slot();
  int other = viewpoint.partner().slot();
  std::ostringstream out;
  if (memory_ == MatrixMemory::kMemory1) {
    out << "In the previous round, your partner chose "
        << kOptionNames[m.last[static_cast<std::size_t>(other)].index]
        << " and you chose "
        << kOptionNames[m.last[static_cast<std::size_t>(me)].index] << ".";
  } else {
    auto list_counts = [&](int slot) {
      std::ostringstream part;
      for (int i = 0; i < num_actions_; ++i) {
        if (i > 0) part << (i + 1 == num_actions_ ? " and " : ", ");
        int c = m.counts[static_cast<std::size_t>(slot)][i];
        part << kOptionNames[i] << " " << c << (c == 1 ? " time" : " times");
      }
      return part.str();
    };
    out << "So far your partner has chosen " << list_counts(other)
        << "; you have chosen " << list_counts(me) << ".";
  }
  out << " This is round " << (m.round + 1) << " of " << kRounds << ".";
  return out.str();
}

}  // namespace tomalign
