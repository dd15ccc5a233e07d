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

#ifndef TOMALIGN_HARNESS_HPP_
#define TOMALIGN_HARNESS_HPP_

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tomalign/agents.hpp"

namespace tomalign {

// Episode outcome. Point is the accumulated shared reward (the matrix-game
// score); Time is the completion step count, set to the cap on failure.
struct Metrics {
  double point = 0;
  int time = 0;
  bool success = false;
  bool capped = false;
  int steps = 0;
};

struct StepRecord {
  int t = 0;
  std::string state_text;
  ActionId a1{};
  ActionId a2{};
  double reward = 0;
  std::optional<AtomDecision> atom1;
  std::optional<AtomDecision> atom2;
  // Verbatim wire exchanges made by served-model agents during this step.
  std::array<std::vector<LlmExchange>, 2> llm_exchanges;
};

// Line-delimited record of one episode; replayable through the environment.
struct EpisodeLog {
  static constexpr const char* kSchema = "tomalign-episode-v1";

  std::string env_name;
  std::string layout_text;  // empty when the environment has no map
  std::array<std::string, 2> agents;
  std::uint64_t seed = 0;
  std::vector<StepRecord> steps;
  Metrics final_metrics;
  bool errored = false;
  bool aborted = false;
  std::string error;
};

// Runs one simultaneous-move episode: both agents choose from the current
// state, the environment steps on the joint action, then each agent observes
// the partner's realized action. BackendUnavailableError marks the log
// errored (the episode is aborted, never silently substituted).
EpisodeLog run_episode(const Env& env, Agent& agent1, Agent& agent2,
                       std::uint64_t seed_label = 0);

void save_episode_log(const EpisodeLog& log, std::ostream& out);
EpisodeLog load_episode_log(std::istream& in);
void save_episode_log_file(const EpisodeLog& log, const std::string& path);
EpisodeLog load_episode_log_file(const std::string& path);

struct ReplayReport {
  bool matched = false;
  int first_divergence = -1;  // step index, -1 when fully matched
  std::string message;
};

// Re-simulates the logged actions through the environment and compares the
// canonical state text at every step, then the final metrics.
ReplayReport replay(const Env& env, const EpisodeLog& log);

// Step-aligned mean of the adaptive agent's normalized weights across logs,
// for the given seat. Rejects logs that carry no adaptive-agent records.
std::vector<std::vector<double>> aggregate_weights(
    const std::vector<EpisodeLog>& logs, PlayerId seat);

// Interactive episode: renders state text and reads the human's actions from
// `in`; the partner acts per its agent. Quitting aborts cleanly with the
// partial log flushed (marked aborted).
EpisodeLog human_play(const Env& env, Agent& partner, PlayerId human_seat,
                      std::istream& in, std::ostream& out);

}  // namespace tomalign

#endif  // TOMALIGN_HARNESS_HPP_
