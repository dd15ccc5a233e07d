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

#include "tomalign/align.hpp"

#include <cmath>

namespace tomalign {
namespace {

void check_predictions(const ExpertState& e,
                       std::span<const ActionId> predictions) {
  if (static_cast<int>(predictions.size()) != e.num_orders()) {
    throw ContractError("expert update: prediction count mismatch");
  }
}

}  // namespace

ExpertState make_expert_state(ExpertMode mode, std::uint64_t seed, double eta,
                              int num_orders) {
  if (num_orders < 1) throw ContractError("expert state: no orders");
  if (eta <= 0) throw ContractError("expert state: eta must be positive");
  ExpertState e;
  e.mode = mode;
  e.losses.assign(static_cast<std::size_t>(num_orders), 0.0);
  e.weights.assign(static_cast<std::size_t>(num_orders), 1.0);
  e.eta = eta;
  e.rng.seed(seed);
  e.step = 1;
  return e;
}

int ftl_select(const ExpertState& e) {
  if (e.mode != ExpertMode::kFtl) {
    throw ContractError("ftl_select: expert state is not in FTL mode");
  }
  int best = 0;
  for (int k = 1; k < e.num_orders(); ++k) {
    if (e.losses[static_cast<std::size_t>(k)] <
        e.losses[static_cast<std::size_t>(best)]) {
      best = k;  // strict improvement only: ties stay with the smallest k
    }
  }
  return best;
}

ExpertState ftl_update(ExpertState e, std::span<const ActionId> predictions,
                       ActionId actual) {
  check_predictions(e, predictions);
  for (int k = 0; k < e.num_orders(); ++k) {
    if (!(predictions[static_cast<std::size_t>(k)] == actual)) {
      e.losses[static_cast<std::size_t>(k)] += 1.0;
    }
  }
  e.step += 1;
  return e;
}

std::vector<double> hedge_probabilities(const ExpertState& e) {
  double total = 0;
  for (double w : e.weights) total += w;
  std::vector<double> p;
  p.reserve(e.weights.size());
  for (double w : e.weights) p.push_back(w / total);
  return p;
}

int hedge_select(ExpertState& e) {
  if (e.mode != ExpertMode::kHedge) {
    throw ContractError("hedge_select: expert state is not in Hedge mode");
  }
  std::vector<double> p = hedge_probabilities(e);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double r = uniform(e.rng);
  double acc = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    acc += p[k];
    if (r < acc) return static_cast<int>(k);
  }
  return e.num_orders() - 1;
}

ExpertState hedge_update(ExpertState e, std::span<const ActionId> predictions,
                         ActionId actual) {
  check_predictions(e, predictions);
  for (int k = 0; k < e.num_orders(); ++k) {
    auto idx = static_cast<std::size_t>(k);
    double loss = predictions[idx] == actual ? 0.0 : 1.0;
    e.weights[idx] *= std::exp(-e.eta * loss);
  }
  e.step += 1;
  return e;
}

std::vector<ActionId> hypothesize(const Env& env, const EnvState& s,
                                  Backend& backend, const TieBreakRule& tie,
                                  PlayerId ego, int num_orders,
                                  double tie_tolerance) {
  if (env.is_terminal(s)) throw ContractError("hypothesize: terminal state");
  std::vector<ActionId> predictions;
  predictions.reserve(static_cast<std::size_t>(num_orders));
  for (int k = 0; k < num_orders; ++k) {
    TomPolicySpec partner_as_k{ego.partner(), k,        &backend,
                               tie,           tie_tolerance, num_orders - 1};
    predictions.push_back(tom_act(env, s, partner_as_k));
  }
  return predictions;
}

AtomDecision atom_act(ExpertState& e, const Env& env, const EnvState& s,
                      Backend& backend, const TieBreakRule& tie, PlayerId ego,
                      double tie_tolerance) {
  if (env.is_terminal(s)) throw ContractError("atom_act: terminal state");
  AtomDecision d;
  d.hypothesis_predictions =
      hypothesize(env, s, backend, tie, ego, e.num_orders(), tie_tolerance);
  if (e.mode == ExpertMode::kFtl) {
    d.chosen_order = ftl_select(e);
    d.weights_snapshot.assign(static_cast<std::size_t>(e.num_orders()), 0.0);
    d.weights_snapshot[static_cast<std::size_t>(d.chosen_order)] = 1.0;
  } else {
    d.weights_snapshot = hedge_probabilities(e);
    d.chosen_order = hedge_select(e);
  }
  d.predicted_partner =
      d.hypothesis_predictions[static_cast<std::size_t>(d.chosen_order)];

  if (auto direct = backend.decide(env, s, ego, d.predicted_partner)) {
    d.ego_action = *direct;
  } else {
    std::vector<ScoredAction> scores =
        backend.score_given_partner(env, s, ego, d.predicted_partner);
    d.ego_action = argmax_with_ties(scores, tie, tie_tolerance);
  }
  return d;
}

ExpertState atom_observe(ExpertState e, const AtomDecision& decision,
                         ActionId actual_partner_action) {
  if (e.mode == ExpertMode::kFtl) {
    return ftl_update(std::move(e), decision.hypothesis_predictions,
                      actual_partner_action);
  }
  return hedge_update(std::move(e), decision.hypothesis_predictions,
                      actual_partner_action);
}

}  // namespace tomalign
