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

#include "tomalign/oracle.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "tomalign/grid_env.hpp"
#include "tomalign/matrix_env.hpp"

namespace tomalign {
namespace {

// Every stored entry must satisfy the backward-induction identity against a
// fresh re-walk of the environment.
double max_bellman_residual(const Env& env, const QOracle& oracle) {
  double worst = 0;
  for (const EnvState& s : oracle.enumeration_order) {
    const QOracle::Entry& e = oracle.table.at(s);
    if (e.values.empty()) continue;  // terminal: identically zero
    for (int i = 0; i < e.num_actions1; ++i) {
      for (int j = 0; j < e.num_actions2; ++j) {
        JointAction a{ActionId{i}, ActionId{j}};
        StepOutcome out = env.step(s, a);
        double expected =
            out.reward +
            (out.done ? 0.0 : oracle.gamma * oracle.max_value(out.next));
        worst = std::max(worst, std::abs(oracle.lookup(s, a) - expected));
      }
    }
  }
  return worst;
}

TEST_CASE("matrix values with zero discount reduce to the stage payoff") {
  MatrixEnv env(MatrixMemory::kMemory1, 2);
  QOracle q = compute_joint_q(env, env.horizon(), env.discount());
  int checked = 0;
  for (const EnvState& s : q.enumeration_order) {
    if (env.is_terminal(s)) continue;
    CHECK(q.lookup(s, {ActionId{0}, ActionId{1}}) == 5.0);
    CHECK(q.lookup(s, {ActionId{1}, ActionId{0}}) == 5.0);
    CHECK(q.lookup(s, {ActionId{0}, ActionId{0}}) == 0.0);
    CHECK(q.lookup(s, {ActionId{1}, ActionId{1}}) == 0.0);
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("grid values equal negated optimal completion times") {
  GridEnv game1(GridLayout::game1());
  QOracle q1 = compute_joint_q(game1, game1.horizon(), game1.discount());
  CHECK(q1.max_value(game1.initial_state()) == -3.0);

  GridEnv game2(GridLayout::game2());
  QOracle q2 = compute_joint_q(game2, game2.horizon(), game2.discount());
  CHECK(q2.max_value(game2.initial_state()) == -6.0);

  // Every optimal joint action at the start attains the maximum exactly.
  for (JointAction a : q2.optimal_joint_actions(game2.initial_state())) {
    CHECK(q2.lookup(game2.initial_state(), a) == -6.0);
  }
}

TEST_CASE("joint breadth-first search finds the optimal times independently") {
  GridEnv game1(GridLayout::game1());
  CHECK(optimal_joint_time(game1) == 3);
  GridEnv game2(GridLayout::game2());
  CHECK(optimal_joint_time(game2) == 6);

  // A bare corridor with swapped goals cannot be solved: passing requires a
  // swap or a shared cell, and both are forbidden.
  GridLayout corridor = GridLayout::parse("X.Y", "corridor");
  GridEnv tube(corridor, 10);
  CHECK_THROWS_AS(optimal_joint_time(tube), UnreachableGoalError);
}

TEST_CASE("q_lookup covers terminal states and rejects foreign states") {
  MatrixEnv env(MatrixMemory::kMemory1, 2);
  QOracle q = compute_joint_q(env, env.horizon(), env.discount());
  // Drive to the terminal state and look it up.
  EnvState s = env.initial_state();
  for (int round = 0; round < MatrixEnv::kRounds; ++round) {
    s = env.step(s, {ActionId{0}, ActionId{1}}).next;
  }
  CHECK(env.is_terminal(s));
  CHECK(q.lookup(s, {ActionId{0}, ActionId{0}}) == 0.0);
  CHECK(q.max_value(s) == 0.0);
  CHECK(q.optimal_joint_actions(s).empty());

  MatrixEnv other(MatrixMemory::kMemoryN, 2);
  CHECK_THROWS_AS(q.lookup(other.initial_state(), {ActionId{0}, ActionId{0}}),
                  ContractError);
}

TEST_CASE("Bellman residuals vanish on every stored entry") {
  GridEnv game1(GridLayout::game1());
  QOracle q1 = compute_joint_q(game1, game1.horizon(), game1.discount());
  CHECK(max_bellman_residual(game1, q1) <= 1e-9);

  MatrixEnv matrix(MatrixMemory::kMemoryN, 3);
  QOracle qm = compute_joint_q(matrix, matrix.horizon(), matrix.discount());
  CHECK(max_bellman_residual(matrix, qm) <= 1e-9);
}

TEST_CASE("value table and search agree under the time-cost view") {
  MatrixEnv matrix(MatrixMemory::kMemory1, 2);
  TimeCostView timed(matrix);
  QOracle q = compute_joint_q(timed, timed.horizon(), timed.discount());
  CHECK(-q.max_value(timed.initial_state()) ==
        static_cast<double>(optimal_joint_time(timed)));

  for (GridLayout layout : {GridLayout::game1(), GridLayout::game2()}) {
    GridEnv env(layout);
    QOracle grid_q = compute_joint_q(env, env.horizon(), env.discount());
    CHECK(-grid_q.max_value(env.initial_state()) ==
          static_cast<double>(optimal_joint_time(env)));
  }
}

TEST_CASE("longer horizons never make completion harder") {
  // With -1 per step, the best value at horizon H is -min(optimal time, H),
  // so the slack H + maxQ grows monotonically and the value pins to the
  // optimal time once the horizon admits it.
  double previous_slack = -1;
  for (int horizon = 1; horizon <= 8; ++horizon) {
    GridEnv capped(GridLayout::game1(), horizon);
    QOracle q = compute_joint_q(capped, horizon, capped.discount());
    double best = q.max_value(capped.initial_state());
    double slack = horizon + best;
    CHECK(slack >= previous_slack);
    previous_slack = slack;
    if (horizon >= 3) CHECK(best == -3.0);
  }
}

TEST_CASE("state enumeration respects the capacity cap") {
  GridEnv env(GridLayout::game1());
  CHECK_THROWS_WITH_AS(compute_joint_q(env, env.horizon(), env.discount(), 10),
                       doctest::Contains("10"), CapacityError);
}

TEST_CASE("the table cache round-trips through its text format") {
  GridEnv env(GridLayout::game1());
  QOracle q = compute_joint_q(env, env.horizon(), env.discount());
  std::stringstream file;
  save_q_cache(q, env, file);

  QOracle loaded = load_q_cache(env, file);
  CHECK(loaded.table.size() == q.table.size());
  for (const EnvState& s : q.enumeration_order) {
    if (env.is_terminal(s)) continue;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        JointAction a{ActionId{i}, ActionId{j}};
        CHECK(loaded.lookup(s, a) == q.lookup(s, a));
      }
    }
  }

  // A cache written for one environment refuses to load against another.
  std::stringstream again;
  save_q_cache(q, env, again);
  GridEnv other(GridLayout::game2());
  CHECK_THROWS_AS(load_q_cache(other, again), ContractError);
}

}  // namespace
}  // namespace tomalign
