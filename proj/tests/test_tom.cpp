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

#include <cstdlib>
#include <memory>

#include "doctest.h"
#include "tomalign/backends.hpp"
#include "tomalign/grid_env.hpp"
#include "tomalign/matrix_env.hpp"

namespace tomalign {
namespace {

constexpr int kA = 0;
constexpr int kB = 1;

std::shared_ptr<const QOracle> oracle_for(const Env& env) {
  return std::make_shared<const QOracle>(
      compute_joint_q(env, env.horizon(), env.discount()));
}

TomPolicySpec spec_for(PlayerId p, int order, Backend& b) {
  return TomPolicySpec{p, order, &b, TieBreakRule::lexicographic(),
                       kDefaultTieTolerance, 2};
}

TEST_CASE("matrix fixed-order decisions alternate with depth") {
  MatrixEnv env(MatrixMemory::kMemory1, 2);
  ExactQBackend backend(oracle_for(env));
  EnvState s0 = env.initial_state();

  // Order 0 ties at the optimistic value and takes the first option; order 1
  // best-responds to that; order 2 best-responds to the response.
  CHECK(tom0_act(env, s0, spec_for(PlayerId::p1(), 0, backend)) ==
        ActionId{kA});
  CHECK(tomk_act(env, s0, spec_for(PlayerId::p1(), 1, backend)) ==
        ActionId{kB});
  CHECK(tomk_act(env, s0, spec_for(PlayerId::p1(), 2, backend)) ==
        ActionId{kA});

  Belief b1 = predict_partner(env, s0, spec_for(PlayerId::p1(), 1, backend));
  CHECK(b1.predicted_partner_action == ActionId{kA});
  Belief b2 = predict_partner(env, s0, spec_for(PlayerId::p1(), 2, backend));
  CHECK(b2.predicted_partner_action == ActionId{kB});
}

TEST_CASE("grid order-0 decisions follow the frozen traces") {
  GridEnv env(GridLayout::game1());
  ExactQBackend backend(oracle_for(env));
  EnvState s0 = env.initial_state();
  // Under the optimistic reduction both players tie between waiting (their
  // blocked first direction) and advancing, so both sit still.
  CHECK(tom0_act(env, s0, spec_for(PlayerId::p1(), 0, backend)) ==
        ActionId{GridEnv::kLeft});
  CHECK(tom0_act(env, s0, spec_for(PlayerId::p2(), 0, backend)) ==
        ActionId{GridEnv::kUp});
  // Their order-1 partners respond by advancing into the center.
  CHECK(tomk_act(env, s0, spec_for(PlayerId::p1(), 1, backend)) ==
        ActionId{GridEnv::kRight});
  CHECK(tomk_act(env, s0, spec_for(PlayerId::p2(), 1, backend)) ==
        ActionId{GridEnv::kDown});
}

TEST_CASE("prediction-irrelevant states give the same action at every order") {
  // When each partner prediction leads to the same best response the
  // conditioning cannot matter. Exhaustively find such matrix states.
  MatrixEnv env(MatrixMemory::kMemory1, 2);
  ExactQBackend backend(oracle_for(env));
  EnvState s0 = env.initial_state();
  auto response_to = [&](ActionId partner) {
    auto scores =
        backend.score_given_partner(env, s0, PlayerId::p1(), partner);
    return argmax_with_ties(scores, TieBreakRule::lexicographic());
  };
  if (response_to(ActionId{kA}) == response_to(ActionId{kB})) {
    CHECK(tomk_act(env, s0, spec_for(PlayerId::p1(), 1, backend)) ==
          tomk_act(env, s0, spec_for(PlayerId::p1(), 2, backend)));
  } else {
    // The coordination game always distinguishes responses; order 1 and 2
    // then differ exactly because the predictions differ.
    CHECK(tomk_act(env, s0, spec_for(PlayerId::p1(), 1, backend)) !=
          tomk_act(env, s0, spec_for(PlayerId::p1(), 2, backend)));
  }
}

TEST_CASE("policy contracts reject bad specs and terminal states") {
  MatrixEnv env(MatrixMemory::kMemory1, 2);
  ExactQBackend backend(oracle_for(env));
  EnvState s0 = env.initial_state();

  CHECK_THROWS_AS(tom0_act(env, s0, spec_for(PlayerId::p1(), 1, backend)),
                  ContractError);
  CHECK_THROWS_AS(tomk_act(env, s0, spec_for(PlayerId::p1(), 0, backend)),
                  ContractError);
  CHECK_THROWS_AS(predict_partner(env, s0, spec_for(PlayerId::p1(), 0, backend)),
                  ContractError);
  CHECK_THROWS_AS(tom_act(env, s0, spec_for(PlayerId::p1(), 3, backend)),
                  ContractError);

  TomPolicySpec null_backend{PlayerId::p1(), 0, nullptr,
                             TieBreakRule::lexicographic(),
                             kDefaultTieTolerance, 2};
  CHECK_THROWS_AS(tom_act(env, s0, null_backend), ContractError);

  EnvState terminal = s0;
  for (int i = 0; i < MatrixEnv::kRounds; ++i) {
    terminal = env.step(terminal, {ActionId{kA}, ActionId{kB}}).next;
  }
  CHECK_THROWS_AS(tom_act(env, terminal, spec_for(PlayerId::p1(), 0, backend)),
                  ContractError);

  // Orders above 2 run when the cap is raised explicitly.
  TomPolicySpec deep{PlayerId::p1(), 3, &backend,
                     TieBreakRule::lexicographic(), kDefaultTieTolerance, 4};
  CHECK(tom_act(env, s0, deep) == ActionId{kB});  // order 3 mirrors order 1
}

TEST_CASE("an order-k decision consults the backend exactly k+1 times") {
  MatrixEnv env(MatrixMemory::kMemory1, 2);
  ExactQBackend inner(oracle_for(env));
  CountingBackend counter(inner);
  EnvState s0 = env.initial_state();
  for (int order = 0; order <= 2; ++order) {
    counter.reset();
    tom_act(env, s0, spec_for(PlayerId::p1(), order, counter));
    CHECK(counter.calls() == order + 1);
  }
}

TEST_CASE("deterministic policies are pure functions of state and seat") {
  GridEnv env(GridLayout::game2());
  ExactQBackend backend(oracle_for(env));
  EnvState s0 = env.initial_state();
  for (int order = 0; order <= 2; ++order) {
    ActionId first = tom_act(env, s0, spec_for(PlayerId::p1(), order, backend));
    for (int i = 0; i < 5; ++i) {
      CHECK(tom_act(env, s0, spec_for(PlayerId::p1(), order, backend)) ==
            first);
    }
  }
}

TEST_CASE("the coordination dichotomy holds at every matrix memory state") {
  // Over every reachable memory state, pairs whose orders differ by exactly
  // one coordinate for 5 points; every other pair collides for 0.
  MatrixEnv env(MatrixMemory::kMemory1, 2);
  auto oracle = oracle_for(env);
  ExactQBackend backend(oracle);
  int states_checked = 0;
  for (const EnvState& s : oracle->enumeration_order) {
    if (env.is_terminal(s)) continue;
    ++states_checked;
    for (int k1 = 0; k1 <= 2; ++k1) {
      for (int k2 = 0; k2 <= 2; ++k2) {
        ActionId a1 = tom_act(env, s, spec_for(PlayerId::p1(), k1, backend));
        ActionId a2 = tom_act(env, s, spec_for(PlayerId::p2(), k2, backend));
        double reward = env.step(s, JointAction{a1, a2}).reward;
        bool aligned = std::abs(k1 - k2) == 1;
        CHECK(reward == (aligned ? 5.0 : 0.0));
      }
    }
  }
  // Round 0 has only the uncoordinated init; rounds 1..14 reach all 4
  // memory configurations.
  CHECK(states_checked == 57);
}

TEST_CASE("seat swap mirrors deterministic decisions in the symmetric game") {
  MatrixEnv env(MatrixMemory::kMemory1, 2);
  auto oracle = oracle_for(env);
  ExactQBackend backend(oracle);
  for (const EnvState& s : oracle->enumeration_order) {
    if (env.is_terminal(s)) continue;
    const auto& m = std::get<MatrixState>(s);
    // Mirror the state across seats and compare the mirrored decisions.
    MatrixState mirrored = m;
    std::swap(mirrored.last[0], mirrored.last[1]);
    std::swap(mirrored.counts[0], mirrored.counts[1]);
    for (int order = 0; order <= 2; ++order) {
      ActionId from_p1 = tom_act(env, s, spec_for(PlayerId::p1(), order, backend));
      ActionId from_p2 = tom_act(env, EnvState{mirrored},
                                 spec_for(PlayerId::p2(), order, backend));
      CHECK(from_p1 == from_p2);
    }
  }
}

}  // namespace
}  // namespace tomalign
