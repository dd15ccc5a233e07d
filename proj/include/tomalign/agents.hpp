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

#ifndef TOMALIGN_AGENTS_HPP_
#define TOMALIGN_AGENTS_HPP_

#include <iosfwd>
#include <memory>
#include <string>

#include "tomalign/align.hpp"
#include "tomalign/backends.hpp"
#include "tomalign/llm_backend.hpp"

namespace tomalign {

// Raised by interactive agents when the human quits mid-episode.
class EpisodeAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An agent owns its decision state for exactly one episode. act() picks an
// action for the current state; observe() delivers the partner's realized
// action after the joint step.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string describe() const = 0;
  virtual ActionId act(const Env& env, const EnvState& s) = 0;
  virtual void observe(const Env& env, const EnvState& s,
                       ActionId partner_action) {
    (void)env;
    (void)s;
    (void)partner_action;
  }
  // Adaptive agents expose their latest decision record for logging.
  virtual const AtomDecision* last_decision() const { return nullptr; }
  // Agents backed by a served model hand over the wire exchanges made since
  // the last call, for verbatim inclusion in the episode log.
  virtual std::vector<LlmExchange> take_llm_exchanges() { return {}; }
};

// A fixed-order agent. With a positive sampling temperature the final
// decision is drawn from the softmax over the policy's range-normalized
// scores (partner predictions stay deterministic); at temperature 0 the
// decision is the plain deterministic policy.
class FixedTomAgent : public Agent {
 public:
  FixedTomAgent(PlayerId player, int order, std::unique_ptr<Backend> backend,
                TieBreakRule tie = {}, std::string label = "",
                SoftmaxConfig decision_noise = {});

  std::string describe() const override;
  ActionId act(const Env& env, const EnvState& s) override;
  std::vector<LlmExchange> take_llm_exchanges() override;

  void set_llm_exchange_buffer(std::shared_ptr<std::vector<LlmExchange>> b) {
    llm_exchanges_ = std::move(b);
  }

 private:
  std::shared_ptr<std::vector<LlmExchange>> llm_exchanges_;
  PlayerId player_;
  int order_;
  std::unique_ptr<Backend> backend_;
  TieBreakRule tie_;
  std::string label_;
  double temperature_;
  std::mt19937_64 rng_;
};

class AtomAgent : public Agent {
 public:
  AtomAgent(PlayerId player, ExpertMode mode, std::unique_ptr<Backend> backend,
            TieBreakRule tie = {}, std::uint64_t seed = 0, double eta = 1.0,
            std::string label = "");

  std::string describe() const override;
  ActionId act(const Env& env, const EnvState& s) override;
  void observe(const Env& env, const EnvState& s,
               ActionId partner_action) override;
  const AtomDecision* last_decision() const override;
  std::vector<LlmExchange> take_llm_exchanges() override;

  void set_llm_exchange_buffer(std::shared_ptr<std::vector<LlmExchange>> b) {
    llm_exchanges_ = std::move(b);
  }

  const ExpertState& expert() const { return expert_; }

 private:
  std::shared_ptr<std::vector<LlmExchange>> llm_exchanges_;
  PlayerId player_;
  std::unique_ptr<Backend> backend_;
  TieBreakRule tie_;
  ExpertState expert_;
  AtomDecision last_;
  bool acted_ = false;
  std::string label_;
};

// Reads action choices from a stream (a terminal in interactive use).
// Accepts an action name or its index; re-prompts on anything else. "quit"
// or end of input aborts the episode.
class HumanAgent : public Agent {
 public:
  HumanAgent(PlayerId player, std::istream& in, std::ostream& out);

  std::string describe() const override { return "human"; }
  ActionId act(const Env& env, const EnvState& s) override;

 private:
  PlayerId player_;
  std::istream& in_;
  std::ostream& out_;
};

}  // namespace tomalign

#endif  // TOMALIGN_AGENTS_HPP_
