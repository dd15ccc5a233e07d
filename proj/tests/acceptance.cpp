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
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line and
// the binary exits non-zero if any criterion fails. Tolerances and runtime
// budgets are pinned in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "tomalign/experiment.hpp"
#include "tomalign/grid_env.hpp"
#include "tomalign/matrix_env.hpp"
#include "tomalign/oracle.hpp"
#include "tomalign/overcooked_env.hpp"
#include "tomalign/tom.hpp"

namespace tomalign {
namespace {

struct CheckContext {
  bool ok = true;
  std::string detail;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double episode_point(const std::string& env_id, const std::string& a1,
                     const std::string& a2) {
  ExperimentConfig cfg;
  cfg.env_id = env_id;
  cfg.agent1 = parse_agent_spec(a1);
  cfg.agent2 = parse_agent_spec(a2);
  cfg.replications = 1;
  return run_experiment(cfg).logs.at(0).final_metrics.point;
}

int episode_time(const Env& env, Agent& a1, Agent& a2) {
  return run_episode(env, a1, a2).final_metrics.time;
}

// ---------------------------------------------------------------------------
// Criterion 1: with the exact backend, lexicographic ties, 15 rounds and the
// uncoordinated start, the four aligned fixed-order pairings score exactly
// 75 and the five misaligned pairings exactly 0.
// ---------------------------------------------------------------------------
void criterion_1(CheckContext& c) {
  for (int k1 = 0; k1 <= 2; ++k1) {
    for (int k2 = 0; k2 <= 2; ++k2) {
      double point = episode_point("matrix-m1-2", "tom" + std::to_string(k1),
                                   "tom" + std::to_string(k2));
      double expected = std::abs(k1 - k2) == 1 ? 75.0 : 0.0;
      c.expect(point == expected,
               "tom" + std::to_string(k1) + " vs tom" + std::to_string(k2) +
                   " scored " + std::to_string(point));
    }
  }
}

// ---------------------------------------------------------------------------
// Criterion 2: leader-following adaptive rows, exact: 75 vs order 0 and 2,
// 70 vs order 1 (one lost round, then locked alignment), 0 in self-play.
// Both seatings are checked.
// ---------------------------------------------------------------------------
void criterion_2(CheckContext& c) {
  auto row = [&](const std::string& a, const std::string& b) {
    return episode_point("matrix-m1-2", a, b);
  };
  c.expect(row("atom-ftl", "tom0") == 75.0, "ftl vs tom0 != 75");
  c.expect(row("tom0", "atom-ftl") == 75.0, "tom0 vs ftl != 75");
  c.expect(row("atom-ftl", "tom1") == 70.0, "ftl vs tom1 != 70");
  c.expect(row("tom1", "atom-ftl") == 70.0, "tom1 vs ftl != 70");
  c.expect(row("atom-ftl", "tom2") == 75.0, "ftl vs tom2 != 75");
  c.expect(row("tom2", "atom-ftl") == 75.0, "tom2 vs ftl != 75");
  c.expect(row("atom-ftl", "atom-ftl") == 0.0, "ftl self-play != 0");
}

// ---------------------------------------------------------------------------
// Criterion 3: sampling-based adaptive rows, statistical: mean over 30
// replications in [65, 75] against each fixed order; self-play mean >= 40
// and strictly above the leader-following self-play score of 0.
// ---------------------------------------------------------------------------
void criterion_3(CheckContext& c) {
  auto mean_point = [&](const std::string& a, const std::string& b) {
    ExperimentConfig cfg;
    cfg.env_id = "matrix-m1-2";
    cfg.agent1 = parse_agent_spec(a);
    cfg.agent2 = parse_agent_spec(b);
    cfg.replications = 30;
    cfg.base_seed = 42;
    return run_experiment(cfg).summary.point_mean;
  };
  for (int k = 0; k <= 2; ++k) {
    double mean = mean_point("atom-hedge", "tom" + std::to_string(k));
    c.expect(mean >= 65.0 && mean <= 75.0,
             "hedge vs tom" + std::to_string(k) + " mean " +
                 std::to_string(mean) + " outside [65,75]");
  }
  double self = mean_point("atom-hedge", "atom-hedge");
  c.expect(self >= 40.0, "hedge self-play mean " + std::to_string(self) +
                             " below 40");
  c.expect(self > 0.0, "hedge self-play not above the FTL self-play 0");
}

// ---------------------------------------------------------------------------
// Criterion 4: sampled expert selection obeys the exponential-weights regret
// bound ln(3) + T/8 (plus 3 standard errors of the estimate) at T = 15 and
// T = 100, over 1000 random and 1000 adversarial 0-1 loss sequences.
// ---------------------------------------------------------------------------
void criterion_4(CheckContext& c) {
  for (int horizon : {15, 100}) {
    for (int adversarial = 0; adversarial <= 1; ++adversarial) {
      const int runs = 1000;
      double sum = 0, sum_sq = 0;
      for (int run = 0; run < runs; ++run) {
        ExpertState e = make_expert_state(ExpertMode::kHedge,
                                          split_seed(42, run));
        std::mt19937_64 loss_rng(split_seed(4242, run));
        std::vector<double> cumulative(3, 0.0);
        double learner = 0;
        for (int t = 0; t < horizon; ++t) {
          int pick = hedge_select(e);
          std::array<int, 3> loss{};
          if (adversarial) {
            // Deterministic adversary: charge the currently heaviest expert.
            std::vector<double> p = hedge_probabilities(e);
            int top = 0;
            for (int k = 1; k < 3; ++k) {
              if (p[static_cast<std::size_t>(k)] >
                  p[static_cast<std::size_t>(top)]) {
                top = k;
              }
            }
            loss[static_cast<std::size_t>(top)] = 1;
          } else {
            for (int k = 0; k < 3; ++k) {
              loss[static_cast<std::size_t>(k)] =
                  static_cast<int>((loss_rng() >> 17) & 1);
            }
          }
          learner += loss[static_cast<std::size_t>(pick)];
          std::vector<ActionId> preds(3);
          for (int k = 0; k < 3; ++k) {
            cumulative[static_cast<std::size_t>(k)] +=
                loss[static_cast<std::size_t>(k)];
            preds[static_cast<std::size_t>(k)] =
                ActionId{loss[static_cast<std::size_t>(k)] ? 1 : 0};
          }
          e = hedge_update(std::move(e), preds, ActionId{0});
        }
        double regret =
            learner - std::min({cumulative[0], cumulative[1], cumulative[2]});
        sum += regret;
        sum_sq += regret * regret;
      }
      double mean = sum / runs;
      double se = std::sqrt((sum_sq / runs - mean * mean) / runs);
      double bound = std::log(3.0) + horizon / 8.0 + 3 * se;
      c.expect(mean <= bound,
               (adversarial ? std::string("adversarial") : "random") + " T=" +
                   std::to_string(horizon) + ": mean regret " +
                   std::to_string(mean) + " above " + std::to_string(bound));
    }
  }
}

// ---------------------------------------------------------------------------
// Criterion 5: against scripted partners of each true order, the
// leader-following agent's true-order hypothesis never errs and the leader
// locks onto it permanently once every lower order has erred once (one loss
// per lower-indexed hypothesis suffices). Verified on the matrix game and
// both grid layouts.
// ---------------------------------------------------------------------------
void criterion_5(CheckContext& c) {
  auto run_case = [&](const Env& env, std::shared_ptr<const QOracle> oracle,
                      int true_order, const std::string& label) {
    ExactQBackend ego_backend(oracle), partner_backend(oracle);
    TomPolicySpec partner{PlayerId::p2(), true_order, &partner_backend,
                          TieBreakRule::lexicographic(), kDefaultTieTolerance,
                          2};
    ExpertState e = make_expert_state(ExpertMode::kFtl);
    EnvState s = env.initial_state();
    bool done = false;
    int lock_step = -1;
    int step = 0;
    while (!done && step < env.horizon()) {
      AtomDecision d = atom_act(e, env, s, ego_backend,
                                TieBreakRule::lexicographic(), PlayerId::p1());
      bool lower_all_lost = true;
      double max_lower_loss = 0;
      for (int k = 0; k < true_order; ++k) {
        max_lower_loss =
            std::max(max_lower_loss, e.losses[static_cast<std::size_t>(k)]);
        if (e.losses[static_cast<std::size_t>(k)] < 1) lower_all_lost = false;
      }
      if (lower_all_lost && lock_step < 0) {
        lock_step = step;
        c.expect(max_lower_loss <= 1.0,
                 label + ": lock-in needed more than one loss per hypothesis");
      }
      if (lock_step >= 0) {
        c.expect(d.chosen_order == true_order,
                 label + ": leader left order " + std::to_string(true_order) +
                     " after lock-in");
      }
      ActionId partner_action = tom_act(env, s, partner);
      StepOutcome out = env.step(s, {d.ego_action, partner_action});
      e = atom_observe(std::move(e), d, partner_action);
      s = out.next;
      done = out.done;
      ++step;
    }
    c.expect(e.losses[static_cast<std::size_t>(true_order)] == 0,
             label + ": the true-order hypothesis took losses");
  };

  MatrixEnv matrix(MatrixMemory::kMemory1, 2);
  auto matrix_oracle = std::make_shared<const QOracle>(
      compute_joint_q(matrix, matrix.horizon(), matrix.discount()));
  for (int k = 0; k <= 2; ++k) {
    run_case(matrix, matrix_oracle, k, "matrix vs tom" + std::to_string(k));
  }
  for (const GridLayout& layout : {GridLayout::game1(), GridLayout::game2()}) {
    GridEnv env(layout);
    auto oracle = std::make_shared<const QOracle>(
        compute_joint_q(env, env.horizon(), env.discount()));
    for (int k = 0; k <= 2; ++k) {
      run_case(env, oracle, k,
               layout.name + " vs tom" + std::to_string(k));
    }
  }
}

// ---------------------------------------------------------------------------
// Criterion 6: the dynamic-programming table and the independent joint
// breadth-first search agree exactly on the matrix game (under the time-cost
// view), both default grids, and 20 randomized small layouts; every stored
// entry satisfies the backward-induction identity to 1e-9.
// ---------------------------------------------------------------------------
double max_bellman_residual(const Env& env, const QOracle& oracle) {
  double worst = 0;
  for (const EnvState& s : oracle.enumeration_order) {
    const QOracle::Entry& e = oracle.table.at(s);
    if (e.values.empty()) continue;
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

void criterion_6(CheckContext& c) {
  auto check_env = [&](const Env& env, const std::string& label) {
    QOracle q = compute_joint_q(env, env.horizon(), env.discount());
    int bfs = optimal_joint_time(env);
    c.expect(-q.max_value(env.initial_state()) == static_cast<double>(bfs),
             label + ": table optimum != search optimum");
    c.expect(max_bellman_residual(env, q) <= 1e-9,
             label + ": backward-induction residual above 1e-9");
  };

  MatrixEnv matrix(MatrixMemory::kMemory1, 2);
  TimeCostView timed(matrix);
  check_env(timed, "matrix (time-cost view)");
  check_env(GridEnv(GridLayout::game1()), "game1");
  check_env(GridEnv(GridLayout::game2()), "game2");

  // Randomized small layouts, regenerated until jointly solvable.
  std::mt19937_64 rng(42);
  int produced = 0;
  while (produced < 20) {
    GridLayout layout;
    layout.width = 3 + static_cast<int>(rng() % 2);
    layout.height = 3 + static_cast<int>(rng() % 2);
    layout.name = "random" + std::to_string(produced);
    std::vector<Cell> open;
    for (int y = 0; y < layout.height; ++y) {
      for (int x = 0; x < layout.width; ++x) {
        if (rng() % 5 == 0) {
          layout.walls.insert(Cell{x, y});
        } else {
          open.push_back(Cell{x, y});
        }
      }
    }
    if (open.size() < 4) continue;
    std::shuffle(open.begin(), open.end(), rng);
    layout.start = {open[0], open[1]};
    layout.goal = {open[2], open[3]};
    try {
      GridEnv env(layout, 30);
      int bfs = optimal_joint_time(env);  // throws when unreachable
      QOracle q = compute_joint_q(env, env.horizon(), env.discount());
      c.expect(-q.max_value(env.initial_state()) == static_cast<double>(bfs),
               layout.name + ": table optimum != search optimum");
      c.expect(max_bellman_residual(env, q) <= 1e-9,
               layout.name + ": residual above 1e-9");
      ++produced;
    } catch (const UnreachableGoalError&) {
    } catch (const ContractError&) {
    }
  }
}

// ---------------------------------------------------------------------------
// Criterion 7: aligned fixed-order pairs complete each grid task in exactly
// the brute-force optimal joint time (3 on the open room, 6 on the corridor
// with alcove); order-0 and order-1 self-pairs live-lock into the 30-step
// cap on both layouts.
// ---------------------------------------------------------------------------
void criterion_7(CheckContext& c) {
  struct GridCase {
    GridLayout layout;
    int optimum;
  };
  for (const GridCase& gc :
       {GridCase{GridLayout::game1(), 3}, GridCase{GridLayout::game2(), 6}}) {
    GridEnv env(gc.layout);
    int bfs = optimal_joint_time(env);
    c.expect(bfs == gc.optimum, gc.layout.name + ": brute-force optimum " +
                                    std::to_string(bfs) + " != frozen " +
                                    std::to_string(gc.optimum));
    auto oracle = std::make_shared<const QOracle>(
        compute_joint_q(env, env.horizon(), env.discount()));
    auto fixed = [&](PlayerId seat, int order) {
      return std::make_unique<FixedTomAgent>(
          seat, order, std::make_unique<ExactQBackend>(oracle));
    };
    for (auto [k1, k2] : std::vector<std::pair<int, int>>{
             {0, 1}, {1, 0}, {1, 2}, {2, 1}}) {
      auto a1 = fixed(PlayerId::p1(), k1);
      auto a2 = fixed(PlayerId::p2(), k2);
      int time = episode_time(env, *a1, *a2);
      c.expect(time == bfs, gc.layout.name + " tom" + std::to_string(k1) +
                               " vs tom" + std::to_string(k2) + " took " +
                               std::to_string(time));
    }
    for (int k : {0, 1}) {
      auto a1 = fixed(PlayerId::p1(), k);
      auto a2 = fixed(PlayerId::p2(), k);
      int time = episode_time(env, *a1, *a2);
      c.expect(time == 30, gc.layout.name + " tom" + std::to_string(k) +
                               " self-play finished in " +
                               std::to_string(time) + ", expected the cap");
    }
  }
}

// ---------------------------------------------------------------------------
// Criterion 8: in the kitchen, the sampling adaptive agent paired with
// scripted order-0 and order-1 partners ends episodes with mean normalized
// weight above 0.5 on the true order, and weights stay uniform until the
// first step where hypotheses disagree and at least one errs.
// ---------------------------------------------------------------------------
void criterion_8(CheckContext& c) {
  OvercookedEnv env(OvercookedLayout::standard());
  for (int true_order = 0; true_order <= 1; ++true_order) {
    double final_weight_sum = 0;
    const int reps = 30;
    for (int rep = 0; rep < reps; ++rep) {
      HeuristicSearchBackend ego_backend, partner_backend;
      TomPolicySpec partner{PlayerId::p2(), true_order, &partner_backend,
                            TieBreakRule::lexicographic(),
                            kDefaultTieTolerance, 2};
      ExpertState e = make_expert_state(ExpertMode::kHedge,
                                        derive_agent_seed(42, rep, 0));
      EnvState s = env.initial_state();
      bool done = false;
      bool discriminated = false;
      while (!done) {
        AtomDecision d = atom_act(e, env, s, ego_backend,
                                  TieBreakRule::lexicographic(),
                                  PlayerId::p1());
        if (!discriminated) {
          for (double w : d.weights_snapshot) {
            c.expect(std::abs(w - 1.0 / 3) < 1e-12,
                     "weights moved before any discriminating step");
          }
        }
        ActionId partner_action = tom_act(env, s, partner);
        const auto& preds = d.hypothesis_predictions;
        bool differ = !(preds[0] == preds[1] && preds[1] == preds[2]);
        bool some_err = false;
        for (ActionId p : preds) {
          if (!(p == partner_action)) some_err = true;
        }
        if (differ && some_err) discriminated = true;
        StepOutcome out = env.step(s, {d.ego_action, partner_action});
        e = atom_observe(std::move(e), d, partner_action);
        s = out.next;
        done = out.done;
      }
      final_weight_sum +=
          hedge_probabilities(e)[static_cast<std::size_t>(true_order)];
    }
    double mean_weight = final_weight_sum / reps;
    c.expect(mean_weight > 0.5,
             "mean final weight on order " + std::to_string(true_order) +
                 " is " + std::to_string(mean_weight));
  }
}

// ---------------------------------------------------------------------------
// Criterion 9: in the 3-action matrix game with the reduced-rationality
// backend, the misaligned-pair mean score strictly increases over
// temperatures {0, 0.5, 1.0} (30 replications each, base seed 42), and the
// aligned-minus-misaligned gap at temperature 0 exceeds the gap at 1.0.
// ---------------------------------------------------------------------------
void criterion_9(CheckContext& c) {
  auto means_at = [&](double tau) {
    std::string suffix = tau > 0 ? ":tau=" + std::to_string(tau) : "";
    double aligned_sum = 0, misaligned_sum = 0;
    int aligned_n = 0, misaligned_n = 0;
    for (int k1 = 0; k1 <= 2; ++k1) {
      for (int k2 = 0; k2 <= 2; ++k2) {
        ExperimentConfig cfg;
        cfg.env_id = "matrix-m1-3";
        cfg.agent1 = parse_agent_spec("tom" + std::to_string(k1) + suffix);
        cfg.agent2 = parse_agent_spec("tom" + std::to_string(k2) + suffix);
        cfg.replications = 30;
        cfg.base_seed = 42;
        double mean = run_experiment(cfg).summary.point_mean;
        if (std::abs(k1 - k2) == 1) {
          aligned_sum += mean;
          ++aligned_n;
        } else {
          misaligned_sum += mean;
          ++misaligned_n;
        }
      }
    }
    return std::pair<double, double>{aligned_sum / aligned_n,
                                     misaligned_sum / misaligned_n};
  };
  auto [aligned0, misaligned0] = means_at(0.0);
  auto [aligned05, misaligned05] = means_at(0.5);
  auto [aligned1, misaligned1] = means_at(1.0);
  c.expect(misaligned0 < misaligned05 && misaligned05 < misaligned1,
           "misaligned means not strictly increasing: " +
               std::to_string(misaligned0) + ", " +
               std::to_string(misaligned05) + ", " +
               std::to_string(misaligned1));
  double gap0 = aligned0 - misaligned0;
  double gap1 = aligned1 - misaligned1;
  c.expect(gap0 > gap1, "alignment gap did not shrink: " +
                            std::to_string(gap0) + " vs " +
                            std::to_string(gap1));
}

// ---------------------------------------------------------------------------
// Criterion 10: environment rule suites. Exhaustive no-collision / no-swap /
// no-goal-entry checks over every reachable grid state and joint action;
// the full kitchen interaction table over held item x facility x pot state;
// replay closure on 100 randomized episodes.
// ---------------------------------------------------------------------------
void criterion_10_grid_rules(CheckContext& c) {
  for (const GridLayout& layout : {GridLayout::game1(), GridLayout::game2()}) {
    GridEnv env(layout);
    std::deque<EnvState> queue;
    std::unordered_set<std::size_t> seen;
    queue.push_back(env.initial_state());
    seen.insert(hash_state(queue.front()));
    int checked = 0;
    while (!queue.empty()) {
      EnvState s = queue.front();
      queue.pop_front();
      if (env.is_terminal(s)) continue;
      const auto& g = std::get<GridState>(s);
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          StepOutcome out = env.step(s, {ActionId{a}, ActionId{b}});
          const auto& n = std::get<GridState>(out.next);
          ++checked;
          c.expect(n.pos[0] != n.pos[1], layout.name + ": shared cell");
          c.expect(!(n.pos[0] == g.pos[1] && n.pos[1] == g.pos[0]),
                   layout.name + ": swap");
          c.expect(n.pos[0] != layout.goal[1] || n.pos[0] == layout.start[0],
                   layout.name + ": player 1 entered the partner goal");
          c.expect(n.pos[1] != layout.goal[0] || n.pos[1] == layout.start[1],
                   layout.name + ": player 2 entered the partner goal");
          if (seen.insert(hash_state(out.next)).second) {
            queue.push_back(out.next);
          }
        }
      }
    }
    c.expect(checked > 0, layout.name + ": nothing checked");
  }
}

void criterion_10_kitchen_rules(CheckContext& c) {
  OvercookedEnv env(OvercookedLayout::standard());
  struct Station {
    Facility facility;
    Cell cook;        // where the cook stands
    ActionId bump;    // the move that bumps the facility
  };
  const std::vector<Station> stations{
      {Facility::kOnionDispenser, Cell{1, 2}, ActionId{OvercookedEnv::kLeft}},
      {Facility::kPlateDispenser, Cell{1, 1}, ActionId{OvercookedEnv::kLeft}},
      {Facility::kPot, Cell{3, 2}, ActionId{OvercookedEnv::kUp}},
      {Facility::kDelivery, Cell{3, 1}, ActionId{OvercookedEnv::kDown}},
      {Facility::kCounter, Cell{2, 2}, ActionId{OvercookedEnv::kUp}},
  };
  const std::vector<PotState> pot_states{
      PotState{0, 0, false}, PotState{2, 0, false}, PotState{3, 5, false},
      PotState{3, 0, true}};
  const std::vector<Item> items{Item::kNone, Item::kOnion, Item::kPlate,
                                Item::kSoup};
  int counter_index = *env.layout().counter_index(Cell{2, 3});

  for (const Station& st : stations) {
    for (Item held : items) {
      for (const PotState& pot : pot_states) {
        for (bool counter_filled : {false, true}) {
          if (st.facility != Facility::kCounter && counter_filled) continue;
          OvercookedState s;
          s.pos = {st.cook, Cell{5, 1}};
          s.held = {held, Item::kNone};
          s.pot = pot;
          if (counter_filled) {
            s.counters[static_cast<std::size_t>(counter_index)] = Item::kOnion;
          }
          StepOutcome out = env.step(EnvState{s},
                                     {st.bump,
                                      ActionId{OvercookedEnv::kStay}});
          const auto& n = std::get<OvercookedState>(out.next);

          // Independent expectation straight from the interaction table.
          Item expected_held = held;
          PotState expected_pot = pot;
          int expected_delivered = 0;
          Item expected_counter =
              counter_filled ? Item::kOnion : Item::kNone;
          switch (st.facility) {
            case Facility::kOnionDispenser:
              if (held == Item::kNone) expected_held = Item::kOnion;
              break;
            case Facility::kPlateDispenser:
              if (held == Item::kNone) expected_held = Item::kPlate;
              break;
            case Facility::kPot:
              if (held == Item::kOnion && pot.onions < 3 && pot.timer == 0 &&
                  !pot.ready) {
                expected_held = Item::kNone;
                expected_pot.onions += 1;
                if (expected_pot.onions == 3) expected_pot.timer = 20;
              } else if (held == Item::kPlate && pot.ready) {
                expected_held = Item::kSoup;
                expected_pot = PotState{};
              }
              break;
            case Facility::kDelivery:
              if (held == Item::kSoup) {
                expected_held = Item::kNone;
                expected_delivered = 1;
              }
              break;
            case Facility::kCounter:
              if (held != Item::kNone && !counter_filled) {
                expected_counter = held;
                expected_held = Item::kNone;
              } else if (held == Item::kNone && counter_filled) {
                expected_held = Item::kOnion;
                expected_counter = Item::kNone;
              }
              break;
            default:
              break;
          }
          // The pot ticks only if it was already cooking at the step start.
          if (pot.timer > 0) {
            expected_pot.timer -= 1;
            if (expected_pot.timer == 0) expected_pot.ready = true;
          }

          std::string label = "facility " +
                              std::to_string(static_cast<int>(st.facility)) +
                              " held " + std::to_string(static_cast<int>(held)) +
                              " pot(" + std::to_string(pot.onions) + "," +
                              std::to_string(pot.timer) + "," +
                              std::to_string(pot.ready) + ")";
          c.expect(n.held[0] == expected_held, label + ": held item");
          c.expect(n.pot == expected_pot, label + ": pot state");
          c.expect(n.delivered == expected_delivered, label + ": deliveries");
          c.expect(n.counters[static_cast<std::size_t>(counter_index)] ==
                       expected_counter,
                   label + ": counter content");
          c.expect(n.pos[0] == st.cook, label + ": the cook moved");
        }
      }
    }
  }
}

void criterion_10_replay(CheckContext& c) {
  const std::vector<std::string> envs{"matrix-m1-2", "matrix-mN-2",
                                      "matrix-m1-3", "grid-game1",
                                      "grid-game2", "overcooked"};
  const std::vector<std::string> kinds{"tom0", "tom1", "tom2", "atom-ftl",
                                       "atom-hedge", "tom1:tau=0.7"};
  std::mt19937_64 rng(2026);
  for (int episode = 0; episode < 100; ++episode) {
    ExperimentConfig cfg;
    cfg.env_id = envs[rng() % envs.size()];
    cfg.agent1 = parse_agent_spec(kinds[rng() % kinds.size()]);
    cfg.agent2 = parse_agent_spec(kinds[rng() % kinds.size()]);
    cfg.replications = 1;
    cfg.base_seed = rng();
    ExperimentResult result = run_experiment(cfg);
    std::unique_ptr<Env> env = make_env(cfg.env_id);
    ReplayReport report = replay(*env, result.logs.at(0));
    c.expect(report.matched, cfg.env_id + " " + cfg.agent1.raw + " vs " +
                                 cfg.agent2.raw + ": " + report.message);
  }
}

void criterion_10(CheckContext& c) {
  criterion_10_grid_rules(c);
  criterion_10_kitchen_rules(c);
  criterion_10_replay(c);
}

struct Criterion {
  int number;
  const char* name;
  double budget_seconds;
  std::function<void(CheckContext&)> run;
};

}  // namespace
}  // namespace tomalign

int main() {
  using namespace tomalign;
  const std::vector<Criterion> criteria{
      {1, "matrix dichotomy: aligned pairs 75, misaligned 0", 1.0,
       criterion_1},
      {2, "leader-following rows: 75 / 70 / 75 / 0 exactly", 1.0, criterion_2},
      {3, "sampling rows: means in [65,75], self-play >= 40", 10.0,
       criterion_3},
      {4, "expert-selection regret within ln3 + T/8 + 3se", 10.0, criterion_4},
      {5, "leader locks onto the partner's true order", 5.0, criterion_5},
      {6, "value table matches joint search on 23 environments", 30.0,
       criterion_6},
      {7, "grids: aligned pairs optimal, self-pairs cap out", 10.0,
       criterion_7},
      {8, "kitchen weights converge to the true order", 60.0, criterion_8},
      {9, "3-action game: noise helps misaligned pairs", 30.0, criterion_9},
      {10, "rule suites: grid laws, kitchen table, replay closure", 60.0,
       criterion_10},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    CheckContext context;
    auto start = std::chrono::steady_clock::now();
    criterion.run(context);
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed >= criterion.budget_seconds) {
      context.ok = false;
      context.detail += (context.detail.empty() ? "" : "; ") +
                        std::string("runtime ") + std::to_string(elapsed) +
                        "s over budget " +
                        std::to_string(criterion.budget_seconds) + "s";
    }
    std::printf("criterion %2d  %-55s %s (%.2fs)\n", criterion.number,
                criterion.name, context.ok ? "PASS" : "FAIL", elapsed);
    if (!context.ok) {
      std::printf("              -> %s\n", context.detail.c_str());
      ++failures;
    }
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
  } else {
    std::printf("all 10 criteria passed\n");
  }
  return failures == 0 ? 0 : 1;
}
