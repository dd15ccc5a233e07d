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

#ifndef TOMALIGN_EXPERIMENT_HPP_
#define TOMALIGN_EXPERIMENT_HPP_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tomalign/backends.hpp"
#include "tomalign/harness.hpp"
#include "tomalign/llm_backend.hpp"

namespace tomalign {

// Textual agent specification, e.g. "tom1", "atom-ftl", "atom-hedge:eta=0.5",
// "tom0:tau=0.9", "greedy", "llm-tom1", "llm-atom-hedge", "human".
// The backend defaults per environment (exact value table for matrix and
// grid, depth-limited search for the kitchen); tau > 0 wraps it in the
// reduced-rationality noise; "llm-" prefixed kinds use the served model.
struct AgentSpec {
  enum class Kind { kFixedTom, kAtom, kGreedy, kHuman };

  std::string raw;
  Kind kind = Kind::kFixedTom;
  int order = 0;                        // kFixedTom
  ExpertMode mode = ExpertMode::kFtl;   // kAtom
  double eta = 1.0;                     // kAtom
  double tau = 0.0;                     // softmax wrapper temperature
  bool use_llm = false;
  int search_depth = 3;
};

AgentSpec parse_agent_spec(const std::string& text);

struct ExperimentConfig {
  std::string env_id = "matrix-m1-2";  // see make_env
  std::string layout_text;             // custom map, optional
  AgentSpec agent1;
  AgentSpec agent2;
  int replications = 30;
  std::uint64_t base_seed = 42;
  std::optional<int> horizon;
  std::string out_dir;  // empty: no files written
  int workers = 1;
  LlmBackendConfig llm;
  Order0Reduction exact_order0 = Order0Reduction::kOptimistic;
};

ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config_json(const std::string& text);

// Environment registry. Known ids: matrix-m1-2, matrix-mN-2, matrix-m1-3,
// matrix-mN-3, grid-game1, grid-game2, grid-custom (layout required),
// overcooked (custom layout optional). Grid layouts are checked for joint
// reachability at load time.
std::unique_ptr<Env> make_env(const std::string& env_id,
                              const std::string& layout_text = "",
                              std::optional<int> horizon = std::nullopt);

// Derived seed for one agent in one replication; documented splitter so runs
// are reproducible from the base seed alone.
std::uint64_t derive_agent_seed(std::uint64_t base_seed, int replication,
                                int seat_slot);

// Builds a concrete agent. The exact-Q oracle is shared across agents and
// replications; an agent gets its own backend instance.
std::unique_ptr<Agent> make_agent(const AgentSpec& spec, PlayerId seat,
                                  const Env& env,
                                  std::shared_ptr<const QOracle> oracle,
                                  std::uint64_t seed,
                                  const ExperimentConfig& cfg);

// Precomputes the exact oracle when either agent needs it (matrix and grid
// environments); returns nullptr otherwise.
std::shared_ptr<const QOracle> prepare_oracle(const Env& env,
                                              const ExperimentConfig& cfg);

struct PairingSummary {
  std::string pairing;
  std::string env_name;
  int replications = 0;
  int errored = 0;
  double point_mean = 0;
  double point_variance = 0;
  double time_mean = 0;
  double time_variance = 0;
};

struct ExperimentResult {
  std::vector<EpisodeLog> logs;  // by replication index
  PairingSummary summary;
};

// Runs the configured replications (concurrently up to cfg.workers), each
// fully isolated with derived seeds. When out_dir is set, writes one
// episode_###.jsonl per replication plus summary.csv. Errored episodes are
// excluded from the aggregates and counted separately.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Summary table serialization (comma-separated, versioned header line).
void write_summary_csv(const std::vector<PairingSummary>& rows,
                       std::ostream& out);
std::vector<PairingSummary> read_summary_csv(std::istream& in);

}  // namespace tomalign

#endif  // TOMALIGN_EXPERIMENT_HPP_
