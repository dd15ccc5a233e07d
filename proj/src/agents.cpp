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

#include "tomalign/agents.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>

namespace tomalign {

FixedTomAgent::FixedTomAgent(PlayerId player, int order,
                             std::unique_ptr<Backend> backend,
                             TieBreakRule tie, std::string label,
                             SoftmaxConfig decision_noise)
    : player_(player),
      order_(order),
      backend_(std::move(backend)),
      tie_(tie),
      label_(std::move(label)),
      temperature_(decision_noise.temperature),
      rng_(decision_noise.seed) {
  if (backend_ == nullptr) throw ContractError("FixedTomAgent: null backend");
  if (temperature_ < 0) {
    throw ContractError("FixedTomAgent: negative temperature");
  }
}

std::vector<LlmExchange> FixedTomAgent::take_llm_exchanges() {
  if (!llm_exchanges_) return {};
  std::vector<LlmExchange> out;
  out.swap(*llm_exchanges_);
  return out;
}

std::string FixedTomAgent::describe() const {
  return label_.empty() ? "tom" + std::to_string(order_) : label_;
}

ActionId FixedTomAgent::act(const Env& env, const EnvState& s) {
  TomPolicySpec spec{player_, order_, backend_.get(), tie_,
                     kDefaultTieTolerance, std::max(order_, 2)};
  if (temperature_ == 0.0) return tom_act(env, s, spec);

  // Reduced rationality: predictions come from the deterministic policy,
  // the final decision is sampled from the softmax over range-normalized
  // scores.
  std::vector<ScoredAction> scores;
  if (order_ == 0) {
    scores = backend_->score_unconditioned(env, s, player_);
  } else {
    Belief belief = predict_partner(env, s, spec);
    scores = backend_->score_given_partner(env, s, player_,
                                           belief.predicted_partner_action);
  }
  double lo = scores[0].second, hi = scores[0].second;
  for (const auto& [a, v] : scores) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi > lo) {
    for (auto& [a, v] : scores) v = (v - lo) / (hi - lo);
  }
  return softmax_sample(scores, temperature_, rng_);
}

AtomAgent::AtomAgent(PlayerId player, ExpertMode mode,
                     std::unique_ptr<Backend> backend, TieBreakRule tie,
                     std::uint64_t seed, double eta, std::string label)
    : player_(player),
      backend_(std::move(backend)),
      tie_(tie),
      expert_(make_expert_state(mode, seed, eta)),
      label_(std::move(label)) {
  if (backend_ == nullptr) throw ContractError("AtomAgent: null backend");
}

std::string AtomAgent::describe() const {
  if (!label_.empty()) return label_;
  return expert_.mode == ExpertMode::kFtl ? "atom-ftl" : "atom-hedge";
}

ActionId AtomAgent::act(const Env& env, const EnvState& s) {
  last_ = atom_act(expert_, env, s, *backend_, tie_, player_);
  acted_ = true;
  return last_.ego_action;
}

void AtomAgent::observe(const Env&, const EnvState&, ActionId partner_action) {
  if (!acted_) return;
  expert_ = atom_observe(std::move(expert_), last_, partner_action);
}

const AtomDecision* AtomAgent::last_decision() const {
  return acted_ ? &last_ : nullptr;
}

std::vector<LlmExchange> AtomAgent::take_llm_exchanges() {
  if (!llm_exchanges_) return {};
  std::vector<LlmExchange> out;
  out.swap(*llm_exchanges_);
  return out;
}

HumanAgent::HumanAgent(PlayerId player, std::istream& in, std::ostream& out)
    : player_(player), in_(in), out_(out) {}

ActionId HumanAgent::act(const Env& env, const EnvState& s) {
  std::vector<ActionId> legal = env.legal_actions(s, player_);
  out_ << "\n" << env.encode_state_text(s, player_) << "\n";
  out_ << "Actions:";
  for (ActionId a : legal) {
    out_ << " [" << a.index << "] " << env.action_name(player_, a);
  }
  out_ << "\n";
  while (true) {
    out_ << "player " << player_.index() << "> " << std::flush;
    std::string line;
    if (!std::getline(in_, line)) {
      throw EpisodeAborted("end of input");
    }
    std::istringstream in(line);
    std::string word;
    if (!(in >> word)) continue;  // blank line: re-prompt
    if (word == "quit" || word == "q") throw EpisodeAborted("quit");
    for (ActionId a : legal) {
      if (word == env.action_name(player_, a) ||
          word == std::to_string(a.index)) {
        return a;
      }
    }
    out_ << "unrecognized action '" << word << "', try again\n";
  }
}

}  // namespace tomalign
