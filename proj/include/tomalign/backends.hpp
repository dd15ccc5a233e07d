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

#ifndef TOMALIGN_BACKENDS_HPP_
#define TOMALIGN_BACKENDS_HPP_

#include <memory>
#include <random>
#include <unordered_map>

#include "tomalign/backend.hpp"
#include "tomalign/oracle.hpp"
#include "tomalign/overcooked_env.hpp"

namespace tomalign {

// How a value-table backend reduces joint values to single-action scores for
// order-0 reasoning. Optimistic assumes the team completes the action with
// the best partner response; UniformPartner averages over partner actions.
enum class Order0Reduction { kOptimistic, kUniformPartner };

// Scores straight out of an exact joint value table.
class ExactQBackend : public Backend {
 public:
  explicit ExactQBackend(std::shared_ptr<const QOracle> oracle,
                         Order0Reduction reduction = Order0Reduction::kOptimistic)
      : oracle_(std::move(oracle)), reduction_(reduction) {}

  std::vector<ScoredAction> score_unconditioned(const Env& env,
                                                const EnvState& s,
                                                PlayerId p) override;
  std::vector<ScoredAction> score_given_partner(const Env& env,
                                                const EnvState& s, PlayerId p,
                                                ActionId partner_action) override;
  double score_joint(const Env& env, const EnvState& s,
                     JointAction a) override;

 private:
  std::shared_ptr<const QOracle> oracle_;
  Order0Reduction reduction_;
};

struct SoftmaxConfig {
  double temperature = 0.0;  // 0 degenerates to the underlying scores
  std::uint64_t seed = 0;
};

// Samples an action with probability proportional to exp(score/temperature).
// temperature == 0 falls back to the deterministic lexicographic argmax.
ActionId softmax_sample(std::span<const ScoredAction> scores,
                        double temperature, std::mt19937_64& rng);

// Reduced-rationality wrapper: perturbs every score with independent Gumbel
// noise scaled by temperature * (score range), so a downstream argmax draws
// from the softmax distribution over range-normalized scores at that
// temperature. Normalizing makes the knob scale-free (decisions are
// invariant to positive affine transforms of the underlying scores, matching
// the argmax semantics it perturbs). Each reasoning level inside a recursive
// policy gets its own fresh draws, mirroring a sampled decision at every
// level. temperature 0 is a bit-exact passthrough.
class SoftmaxBackend : public Backend {
 public:
  SoftmaxBackend(std::unique_ptr<Backend> inner, SoftmaxConfig config);

  std::vector<ScoredAction> score_unconditioned(const Env& env,
                                                const EnvState& s,
                                                PlayerId p) override;
  std::vector<ScoredAction> score_given_partner(const Env& env,
                                                const EnvState& s, PlayerId p,
                                                ActionId partner_action) override;
  // Joint scores pass through unperturbed; they feed diagnostics, not
  // decisions.
  double score_joint(const Env& env, const EnvState& s,
                     JointAction a) override;

 private:
  std::vector<ScoredAction> perturb(std::vector<ScoredAction> scores);

  std::unique_ptr<Backend> inner_;
  double temperature_;
  std::mt19937_64 rng_;
};

struct SearchConfig {
  int depth = 3;
  double delivered_weight = 20.0;
  double ready_weight = 8.0;
  double onion_weight = 3.0;
  double distance_weight = 0.1;
};

// Depth-limited exhaustive joint lookahead over the kitchen, scoring leaves
// with a shaped team potential:
//
//   phi = 20*delivered + 8*ready + 3*onions_in_pot + item_credit
//         - 0.1*sum(distance of each cook to its current task target)
//         - t
//
// item_credit pays for work in progress (an onion in a hand or on a counter
// 1.5, a plate 2 while the pot is cooking or ready, a soup 18) so that every
// step along the soup chain raises the potential and a shallow lookahead is
// enough to commit to pickups. Each cook's task target follows the stage:
// carry the held item where it is needed next, fetch what the team is
// missing, or idle when there is nothing useful to do.
//
// Conditioning pins the partner's first move; everything after maximizes the
// team potential. Deterministic given the state and config.
class HeuristicSearchBackend : public Backend {
 public:
  explicit HeuristicSearchBackend(SearchConfig config = {});

  std::vector<ScoredAction> score_unconditioned(const Env& env,
                                                const EnvState& s,
                                                PlayerId p) override;
  std::vector<ScoredAction> score_given_partner(const Env& env,
                                                const EnvState& s, PlayerId p,
                                                ActionId partner_action) override;
  double score_joint(const Env& env, const EnvState& s,
                     JointAction a) override;

  double potential(const OvercookedEnv& env, const OvercookedState& s);

  static constexpr double kOnionCredit = 1.5;
  static constexpr double kPlateCredit = 2.0;
  static constexpr double kSoupCredit = 18.0;

 private:
  const OvercookedEnv& kitchen(const Env& env) const;
  double lookahead_value(const OvercookedEnv& env, const EnvState& s,
                         int depth);
  std::vector<ScoredAction> score(const Env& env, const EnvState& s,
                                  PlayerId p,
                                  std::optional<ActionId> partner_action);
  // Distance from a cell to bumping range of a facility kind (steps to an
  // adjacent walkable cell, plus one for the bump). Precomputed per layout.
  int travel_distance(const OvercookedEnv& env, Cell from, Facility target);
  int cook_task_distance(const OvercookedEnv& env, const OvercookedState& s,
                         int cook);
  void ensure_distance_fields(const OvercookedEnv& env);

  SearchConfig config_;
  struct MemoKey {
    EnvState state;
    int depth;
    bool operator==(const MemoKey&) const = default;
  };
  struct MemoHash {
    std::size_t operator()(const MemoKey& k) const {
      std::size_t h = hash_state(k.state);
      hash_combine(h, static_cast<std::size_t>(k.depth));
      return h;
    }
  };
  std::unordered_map<MemoKey, double, MemoHash> memo_;
  const OvercookedEnv* fields_env_ = nullptr;
  std::unordered_map<int, std::vector<int>> distance_fields_;  // by facility
};

// Counts backend consultations; test instrumentation for recursion-depth
// guarantees.
class CountingBackend : public Backend {
 public:
  explicit CountingBackend(Backend& inner) : inner_(inner) {}
  std::vector<ScoredAction> score_unconditioned(const Env& env,
                                                const EnvState& s,
                                                PlayerId p) override {
    ++calls_;
    return inner_.score_unconditioned(env, s, p);
  }
  std::vector<ScoredAction> score_given_partner(const Env& env,
                                                const EnvState& s, PlayerId p,
                                                ActionId partner) override {
    ++calls_;
    return inner_.score_given_partner(env, s, p, partner);
  }
  double score_joint(const Env& env, const EnvState& s,
                     JointAction a) override {
    return inner_.score_joint(env, s, a);
  }
  int calls() const { return calls_; }
  void reset() { calls_ = 0; }

 private:
  Backend& inner_;
  int calls_ = 0;
};

}  // namespace tomalign

#endif  // TOMALIGN_BACKENDS_HPP_
