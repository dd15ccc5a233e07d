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

#include "tomalign/harness.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "tomalign/grid_env.hpp"
#include "tomalign/overcooked_env.hpp"

namespace tomalign {
namespace {

using nlohmann::json;

std::string layout_text_of(const Env& env) {
  if (const auto* grid = dynamic_cast<const GridEnv*>(&env)) {
    return grid->layout().to_text();
  }
  if (const auto* kitchen = dynamic_cast<const OvercookedEnv*>(&env)) {
    return kitchen->layout().to_text();
  }
  return "";
}

json atom_to_json(const AtomDecision& d) {
  json preds = json::array();
  for (ActionId a : d.hypothesis_predictions) preds.push_back(a.index);
  return json{{"k", d.chosen_order},
              {"preds", preds},
              {"pred", d.predicted_partner.index},
              {"P", d.weights_snapshot}};
}

AtomDecision atom_from_json(const json& j) {
  AtomDecision d;
  d.chosen_order = j.at("k").get<int>();
  for (const auto& v : j.at("preds")) {
    d.hypothesis_predictions.push_back(ActionId{v.get<int>()});
  }
  d.predicted_partner = ActionId{j.at("pred").get<int>()};
  d.weights_snapshot = j.at("P").get<std::vector<double>>();
  return d;
}

Metrics finalize_metrics(const Env& env, const EnvState& final_state,
                         double total_reward, int steps) {
  Metrics m;
  m.point = total_reward;
  m.steps = steps;
  m.success = env.is_success(final_state);
  m.capped = !m.success;
  m.time = m.success ? steps : env.horizon();
  return m;
}

}  // namespace

EpisodeLog run_episode(const Env& env, Agent& agent1, Agent& agent2,
                       std::uint64_t seed_label) {
  EpisodeLog log;
  log.env_name = env.name();
  log.layout_text = layout_text_of(env);
  log.agents = {agent1.describe(), agent2.describe()};
  log.seed = seed_label;

  EnvState s = env.initial_state();
  double total = 0;
  int steps = 0;
  try {
    while (!env.is_terminal(s) && steps < env.horizon()) {
      StepRecord rec;
      rec.t = steps;
      rec.state_text = env.encode_state_text(s);
      rec.a1 = agent1.act(env, s);
      rec.a2 = agent2.act(env, s);
      StepOutcome out = env.step(s, JointAction{rec.a1, rec.a2});
      rec.reward = out.reward;
      if (const AtomDecision* d = agent1.last_decision()) rec.atom1 = *d;
      if (const AtomDecision* d = agent2.last_decision()) rec.atom2 = *d;
      rec.llm_exchanges = {agent1.take_llm_exchanges(),
                           agent2.take_llm_exchanges()};
      agent1.observe(env, s, rec.a2);
      agent2.observe(env, s, rec.a1);
      log.steps.push_back(std::move(rec));
      total += out.reward;
      s = out.next;
      ++steps;
      if (out.done) break;
    }
  } catch (const BackendUnavailableError& e) {
    log.errored = true;
    log.error = e.what();
  }
  log.final_metrics = finalize_metrics(env, s, total, steps);
  return log;
}

void save_episode_log(const EpisodeLog& log, std::ostream& out) {
  json header{{"schema", EpisodeLog::kSchema},
              {"env", log.env_name},
              {"agents", log.agents},
              {"seed", log.seed}};
  if (!log.layout_text.empty()) header["layout"] = log.layout_text;
  out << header.dump() << "\n";
  for (const StepRecord& rec : log.steps) {
    json j{{"t", rec.t},
           {"state", rec.state_text},
           {"a1", rec.a1.index},
           {"a2", rec.a2.index},
           {"reward", rec.reward}};
    if (rec.atom1) j["atom1"] = atom_to_json(*rec.atom1);
    if (rec.atom2) j["atom2"] = atom_to_json(*rec.atom2);
    for (int seat = 0; seat < 2; ++seat) {
      const auto& exchanges =
          rec.llm_exchanges[static_cast<std::size_t>(seat)];
      if (exchanges.empty()) continue;
      json list = json::array();
      for (const LlmExchange& e : exchanges) {
        list.push_back(json{{"request", e.request_body},
                            {"response", e.response_body},
                            {"parsed", e.parsed_ok}});
      }
      j[seat == 0 ? "llm1" : "llm2"] = std::move(list);
    }
    out << j.dump() << "\n";
  }
  json footer{{"final",
               json{{"point", log.final_metrics.point},
                    {"time", log.final_metrics.time},
                    {"success", log.final_metrics.success},
                    {"capped", log.final_metrics.capped},
                    {"steps", log.final_metrics.steps}}},
              {"errored", log.errored},
              {"aborted", log.aborted}};
  if (!log.error.empty()) footer["error"] = log.error;
  out << footer.dump() << "\n";
}

EpisodeLog load_episode_log(std::istream& in) {
  EpisodeLog log;
  std::string line;
  if (!std::getline(in, line)) throw ContractError("episode log: empty");
  json header = json::parse(line);
  if (header.value("schema", "") != EpisodeLog::kSchema) {
    throw ContractError("episode log: unknown schema");
  }
  log.env_name = header.at("env").get<std::string>();
  log.layout_text = header.value("layout", "");
  auto agents = header.at("agents");
  log.agents = {agents.at(0).get<std::string>(),
                agents.at(1).get<std::string>()};
  log.seed = header.value("seed", 0ULL);

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    if (j.contains("final")) {
      const json& f = j.at("final");
      log.final_metrics.point = f.at("point").get<double>();
      log.final_metrics.time = f.at("time").get<int>();
      log.final_metrics.success = f.at("success").get<bool>();
      log.final_metrics.capped = f.at("capped").get<bool>();
      log.final_metrics.steps = f.at("steps").get<int>();
      log.errored = j.value("errored", false);
      log.aborted = j.value("aborted", false);
      log.error = j.value("error", "");
      continue;
    }
    StepRecord rec;
    rec.t = j.at("t").get<int>();
    rec.state_text = j.at("state").get<std::string>();
    rec.a1 = ActionId{j.at("a1").get<int>()};
    rec.a2 = ActionId{j.at("a2").get<int>()};
    rec.reward = j.at("reward").get<double>();
    if (j.contains("atom1")) rec.atom1 = atom_from_json(j.at("atom1"));
    if (j.contains("atom2")) rec.atom2 = atom_from_json(j.at("atom2"));
    for (int seat = 0; seat < 2; ++seat) {
      const char* key = seat == 0 ? "llm1" : "llm2";
      if (!j.contains(key)) continue;
      for (const auto& e : j.at(key)) {
        LlmExchange exchange;
        exchange.request_body = e.at("request").get<std::string>();
        exchange.response_body = e.at("response").get<std::string>();
        exchange.parsed_ok = e.at("parsed").get<bool>();
        rec.llm_exchanges[static_cast<std::size_t>(seat)]
            .push_back(std::move(exchange));
      }
    }
    log.steps.push_back(std::move(rec));
  }
  return log;
}

void save_episode_log_file(const EpisodeLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ContractError("episode log: cannot open " + path);
  save_episode_log(log, out);
}

EpisodeLog load_episode_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("episode log: cannot open " + path);
  return load_episode_log(in);
}

ReplayReport replay(const Env& env, const EpisodeLog& log) {
  ReplayReport report;
  if (env.name() != log.env_name) {
    report.message = "environment mismatch: log is for " + log.env_name;
    report.first_divergence = 0;
    return report;
  }
  EnvState s = env.initial_state();
  double total = 0;
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    const StepRecord& rec = log.steps[i];
    if (env.encode_state_text(s) != rec.state_text) {
      report.first_divergence = static_cast<int>(i);
      report.message =
          "state mismatch at step " + std::to_string(i) + ": expected \"" +
          rec.state_text + "\", re-simulated \"" + env.encode_state_text(s) +
          "\"";
      return report;
    }
    StepOutcome out = env.step(s, JointAction{rec.a1, rec.a2});
    if (out.reward != rec.reward) {
      report.first_divergence = static_cast<int>(i);
      report.message = "reward mismatch at step " + std::to_string(i);
      return report;
    }
    total += out.reward;
    s = out.next;
  }
  if (!log.aborted && !log.errored) {
    if (log.final_metrics.point != total ||
        log.final_metrics.success != env.is_success(s)) {
      report.first_divergence = static_cast<int>(log.steps.size());
      report.message = "final metrics mismatch";
      return report;
    }
  }
  report.matched = true;
  report.message = "full match (" + std::to_string(log.steps.size()) +
                   " steps re-simulated)";
  return report;
}

std::vector<std::vector<double>> aggregate_weights(
    const std::vector<EpisodeLog>& logs, PlayerId seat) {
  bool any = false;
  std::vector<std::vector<double>> sums;
  std::vector<int> counts;
  for (const EpisodeLog& log : logs) {
    for (std::size_t t = 0; t < log.steps.size(); ++t) {
      const auto& rec = log.steps[t];
      const std::optional<AtomDecision>& d =
          seat.index() == 1 ? rec.atom1 : rec.atom2;
      if (!d) continue;
      any = true;
      if (sums.size() <= t) {
        sums.resize(t + 1);
        counts.resize(t + 1, 0);
      }
      if (sums[t].empty()) sums[t].assign(d->weights_snapshot.size(), 0.0);
      for (std::size_t k = 0; k < d->weights_snapshot.size(); ++k) {
        sums[t][k] += d->weights_snapshot[k];
      }
      counts[t] += 1;
    }
  }
  if (!any) {
    throw ContractError(
        "aggregate_weights: no adaptive-agent records in the given seat");
  }
  for (std::size_t t = 0; t < sums.size(); ++t) {
    for (double& v : sums[t]) v /= counts[t];
  }
  return sums;
}

EpisodeLog human_play(const Env& env, Agent& partner, PlayerId human_seat,
                      std::istream& in, std::ostream& out) {
  HumanAgent human(human_seat, in, out);
  Agent& agent1 = human_seat.index() == 1 ? static_cast<Agent&>(human)
                                          : partner;
  Agent& agent2 = human_seat.index() == 1 ? partner
                                          : static_cast<Agent&>(human);
  EpisodeLog log;
  log.env_name = env.name();
  log.layout_text = layout_text_of(env);
  log.agents = {agent1.describe(), agent2.describe()};

  EnvState s = env.initial_state();
  double total = 0;
  int steps = 0;
  try {
    while (!env.is_terminal(s) && steps < env.horizon()) {
      StepRecord rec;
      rec.t = steps;
      rec.state_text = env.encode_state_text(s);
      rec.a1 = agent1.act(env, s);
      rec.a2 = agent2.act(env, s);
      StepOutcome outcome = env.step(s, JointAction{rec.a1, rec.a2});
      rec.reward = outcome.reward;
      if (const AtomDecision* d = agent1.last_decision()) rec.atom1 = *d;
      if (const AtomDecision* d = agent2.last_decision()) rec.atom2 = *d;
      agent1.observe(env, s, rec.a2);
      agent2.observe(env, s, rec.a1);
      log.steps.push_back(std::move(rec));
      total += outcome.reward;
      s = outcome.next;
      ++steps;
      out << "joint action: ("
          << env.action_name(PlayerId::p1(), log.steps.back().a1) << ", "
          << env.action_name(PlayerId::p2(), log.steps.back().a2)
          << "), reward " << outcome.reward << "\n";
      if (outcome.done) break;
    }
  } catch (const EpisodeAborted& e) {
    log.aborted = true;
    log.error = e.what();
    out << "episode aborted (" << e.what() << ")\n";
  }
  log.final_metrics = finalize_metrics(env, s, total, steps);
  if (!log.aborted) {
    out << (log.final_metrics.success ? "task complete" : "step cap reached")
        << " after " << steps << " steps\n";
  }
  return log;
}

}  // namespace tomalign
