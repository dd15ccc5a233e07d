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

#ifndef TOMALIGN_LLM_BACKEND_HPP_
#define TOMALIGN_LLM_BACKEND_HPP_

#include <functional>
#include <string>
#include <vector>

#include "tomalign/backend.hpp"

namespace tomalign {

// Prompt templates. Placeholders: {state} (canonical state text from the
// acting player's viewpoint), {actions} (comma-separated legal action
// names), {partner} (predicted partner action name; prediction templates
// and decision templates receive it when a prediction is available).
struct LlmPromptTemplates {
  std::string system =
      "You are one of two cooperating players in a simultaneous-move game. "
      "Answer with exactly one action name.";
  std::string decision =
      "{state} Your available actions: {actions}. "
      "Choose the action that best coordinates with your partner.";
  std::string decision_with_prediction =
      "{state} Your partner is predicted to choose {partner}. "
      "Your available actions: {actions}. "
      "Choose the action that best coordinates with that prediction.";
  std::string prediction =
      "{state} Your available actions: {actions}. "
      "Choose the action you would take.";
};

struct LlmBackendConfig {
  std::string endpoint;  // full URL of a chat-completions route
  std::string model;
  double temperature = 0.1;
  int max_retries = 3;
  int timeout_seconds = 30;
  LlmPromptTemplates templates;
  // Credentials come only from the environment, never from config files.
  std::string api_key_env = "TOMALIGN_LLM_API_KEY";
  // Cap on simultaneously in-flight requests across all episodes.
  int max_in_flight = 4;
};

// Verbatim record of one exchange, for episode logs.
struct LlmExchange {
  std::string request_body;
  std::string response_body;
  bool parsed_ok = false;
};

using LlmLogger = std::function<void(const LlmExchange&)>;

// Sends one decision request and parses the first legal action name token
// from the reply. Retries (fresh request) on parse failures up to
// config.max_retries, then falls back to the lexicographically first legal
// action (logged as a failed parse). Network errors exhaust the same retry
// budget and then raise BackendUnavailableError.
ActionId llm_decide(const LlmBackendConfig& config, const Env& env,
                    const EnvState& s, PlayerId p,
                    std::optional<ActionId> predicted_partner,
                    const std::vector<ActionId>& legal,
                    const LlmLogger& logger = nullptr);

// Finds the first token of `reply` that names one of the legal actions.
// Tokens split on non-alphanumerics; names compare case-insensitively except
// single-letter names, which must match exactly (so the article "a" never
// reads as option A).
std::optional<ActionId> parse_action_reply(const std::string& reply,
                                           const Env& env, PlayerId p,
                                           const std::vector<ActionId>& legal);

// Renders a prompt template; exposed for tests.
std::string render_prompt(const std::string& tmpl, const Env& env,
                          const EnvState& s, PlayerId p,
                          std::optional<ActionId> predicted_partner,
                          const std::vector<ActionId>& legal);

// A Backend whose decisions come from a served language model. Scoring
// methods are unavailable on this realization and throw ContractError; the
// reasoning policies use the direct decision path instead.
class LlmBackend : public Backend {
 public:
  explicit LlmBackend(LlmBackendConfig config, LlmLogger logger = nullptr)
      : config_(std::move(config)), logger_(std::move(logger)) {}

  std::vector<ScoredAction> score_unconditioned(const Env&, const EnvState&,
                                                PlayerId) override {
    throw ContractError("LlmBackend does not expose scores");
  }
  std::vector<ScoredAction> score_given_partner(const Env&, const EnvState&,
                                                PlayerId, ActionId) override {
    throw ContractError("LlmBackend does not expose scores");
  }
  double score_joint(const Env&, const EnvState&, JointAction) override {
    throw ContractError("LlmBackend does not expose scores");
  }

  std::optional<ActionId> decide(const Env& env, const EnvState& s, PlayerId p,
                                 std::optional<ActionId> partner) override {
    return llm_decide(config_, env, s, p, partner, env.legal_actions(s, p),
                      logger_);
  }

  const LlmBackendConfig& config() const { return config_; }

 private:
  LlmBackendConfig config_;
  LlmLogger logger_;
};

}  // namespace tomalign

#endif  // TOMALIGN_LLM_BACKEND_HPP_
