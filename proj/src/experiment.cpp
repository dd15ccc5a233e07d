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

#include "tomalign/experiment.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "tomalign/grid_env.hpp"
#include "tomalign/matrix_env.hpp"
#include "tomalign/oracle.hpp"
#include "tomalign/overcooked_env.hpp"

namespace tomalign {
namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

double parse_param(const std::string& part, const std::string& key) {
  return std::stod(part.substr(key.size()));
}

}  // namespace

AgentSpec parse_agent_spec(const std::string& text) {
  AgentSpec spec;
  spec.raw = text;
  std::vector<std::string> parts = split(text, ':');
  if (parts.empty()) throw ContractError("agent spec: empty");
  std::string kind = parts[0];

  if (kind.rfind("llm-", 0) == 0) {
    spec.use_llm = true;
    kind = kind.substr(4);
  }
  if (kind == "tom0" || kind == "tom1" || kind == "tom2") {
    spec.kind = AgentSpec::Kind::kFixedTom;
    spec.order = kind[3] - '0';
  } else if (kind == "atom-ftl") {
    spec.kind = AgentSpec::Kind::kAtom;
    spec.mode = ExpertMode::kFtl;
  } else if (kind == "atom-hedge") {
    spec.kind = AgentSpec::Kind::kAtom;
    spec.mode = ExpertMode::kHedge;
  } else if (kind == "greedy") {
    spec.kind = AgentSpec::Kind::kGreedy;
  } else if (kind == "human") {
    spec.kind = AgentSpec::Kind::kHuman;
  } else {
    throw ContractError("agent spec: unknown kind '" + kind + "'");
  }

  for (std::size_t i = 1; i < parts.size(); ++i) {
    const std::string& p = parts[i];
    if (p.rfind("tau=", 0) == 0) {
      spec.tau = parse_param(p, "tau=");
    } else if (p.rfind("eta=", 0) == 0) {
      spec.eta = parse_param(p, "eta=");
    } else if (p.rfind("depth=", 0) == 0) {
      spec.search_depth = static_cast<int>(parse_param(p, "depth="));
    } else {
      throw ContractError("agent spec: unknown parameter '" + p + "'");
    }
  }
  return spec;
}

std::unique_ptr<Env> make_env(const std::string& env_id,
                              const std::string& layout_text,
                              std::optional<int> horizon) {
  if (env_id.rfind("matrix-", 0) == 0) {
    std::vector<std::string> parts = split(env_id, '-');
    if (parts.size() != 3) throw ContractError("unknown environment " + env_id);
    MatrixMemory mem;
    if (parts[1] == "m1") {
      mem = MatrixMemory::kMemory1;
    } else if (parts[1] == "mN") {
      mem = MatrixMemory::kMemoryN;
    } else {
      throw ContractError("unknown environment " + env_id);
    }
    return std::make_unique<MatrixEnv>(mem, std::stoi(parts[2]));
  }
  if (env_id == "grid-game1" || env_id == "grid-game2" ||
      env_id == "grid-custom") {
    GridLayout layout;
    if (env_id == "grid-game1") {
      layout = GridLayout::game1();
    } else if (env_id == "grid-game2") {
      layout = GridLayout::game2();
    } else {
      if (layout_text.empty()) {
        throw ContractError("grid-custom requires a layout map");
      }
      layout = GridLayout::parse(layout_text);
    }
    if (!layout_text.empty() && env_id != "grid-custom") {
      layout = GridLayout::parse(layout_text, layout.name);
    }
    auto env = std::make_unique<GridEnv>(layout, horizon.value_or(30));
    optimal_joint_time(*env);  // verifies joint reachability at load time
    return env;
  }
  if (env_id == "overcooked") {
    OvercookedLayout layout = layout_text.empty()
                                  ? OvercookedLayout::standard()
                                  : OvercookedLayout::parse(layout_text);
    return std::make_unique<OvercookedEnv>(layout, horizon.value_or(100));
  }
  throw ContractError("unknown environment " + env_id);
}

std::uint64_t derive_agent_seed(std::uint64_t base_seed, int replication,
                                int seat_slot) {
  // base -> replication stream -> per-seat stream, via splitmix64.
  std::uint64_t rep_seed =
      split_seed(base_seed, static_cast<std::uint64_t>(replication) + 1);
  return split_seed(rep_seed, static_cast<std::uint64_t>(seat_slot) + 1);
}

std::shared_ptr<const QOracle> prepare_oracle(const Env& env,
                                              const ExperimentConfig& cfg) {
  bool wants_exact = false;
  for (const AgentSpec* spec : {&cfg.agent1, &cfg.agent2}) {
    if (spec->kind == AgentSpec::Kind::kHuman || spec->use_llm ||
        spec->kind == AgentSpec::Kind::kGreedy) {
      continue;
    }
    wants_exact = true;
  }
  if (!wants_exact) return nullptr;
  if (dynamic_cast<const OvercookedEnv*>(&env) != nullptr) {
    return nullptr;  // the kitchen uses the search backend instead
  }
  return std::make_shared<const QOracle>(
      compute_joint_q(env, env.horizon(), env.discount()));
}

namespace {

std::unique_ptr<Backend> make_backend(
    const AgentSpec& spec, const Env& env,
    std::shared_ptr<const QOracle> oracle, std::uint64_t seed,
    const ExperimentConfig& cfg,
    const std::shared_ptr<std::vector<LlmExchange>>& exchange_buffer) {
  std::unique_ptr<Backend> base;
  if (spec.use_llm) {
    LlmLogger logger;
    if (exchange_buffer) {
      auto buffer = exchange_buffer;
      logger = [buffer](const LlmExchange& e) { buffer->push_back(e); };
    }
    base = std::make_unique<LlmBackend>(cfg.llm, logger);
  } else if (dynamic_cast<const OvercookedEnv*>(&env) != nullptr ||
             spec.kind == AgentSpec::Kind::kGreedy) {
    SearchConfig sc;
    sc.depth = spec.search_depth;
    base = std::make_unique<HeuristicSearchBackend>(sc);
  } else {
    if (oracle == nullptr) {
      throw ContractError("agent " + spec.raw +
                          " needs the exact oracle, which is unavailable");
    }
    base = std::make_unique<ExactQBackend>(std::move(oracle),
                                           cfg.exact_order0);
  }
  if (spec.tau > 0 && spec.kind == AgentSpec::Kind::kAtom) {
    // Adaptive agents take their noise inside the backend; fixed agents
    // sample at the decision level instead (see make_agent).
    SoftmaxConfig noise{spec.tau, split_seed(seed, 0x6e6f697365ULL)};
    base = std::make_unique<SoftmaxBackend>(std::move(base), noise);
  }
  return base;
}

}  // namespace

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, PlayerId seat,
                                  const Env& env,
                                  std::shared_ptr<const QOracle> oracle,
                                  std::uint64_t seed,
                                  const ExperimentConfig& cfg) {
  if (spec.use_llm && spec.tau > 0) {
    throw ContractError(
        "agent " + spec.raw +
        ": temperature for served models is set in the llm configuration");
  }
  SoftmaxConfig decision_noise{spec.tau, split_seed(seed, 0x6e6f697365ULL)};
  std::shared_ptr<std::vector<LlmExchange>> exchanges;
  if (spec.use_llm) exchanges = std::make_shared<std::vector<LlmExchange>>();
  switch (spec.kind) {
    case AgentSpec::Kind::kHuman:
      return std::make_unique<HumanAgent>(seat, std::cin, std::cout);
    case AgentSpec::Kind::kGreedy: {
      // Scripted planning baseline: order-0 reasoning over the search
      // backend.
      auto backend = make_backend(spec, env, oracle, seed, cfg, exchanges);
      auto agent = std::make_unique<FixedTomAgent>(
          seat, 0, std::move(backend), TieBreakRule::lexicographic(), spec.raw,
          decision_noise);
      agent->set_llm_exchange_buffer(exchanges);
      return agent;
    }
    case AgentSpec::Kind::kFixedTom: {
      auto backend =
          make_backend(spec, env, std::move(oracle), seed, cfg, exchanges);
      auto agent = std::make_unique<FixedTomAgent>(
          seat, spec.order, std::move(backend), TieBreakRule::lexicographic(),
          spec.raw, decision_noise);
      agent->set_llm_exchange_buffer(exchanges);
      return agent;
    }
    case AgentSpec::Kind::kAtom: {
      auto backend =
          make_backend(spec, env, std::move(oracle), seed, cfg, exchanges);
      auto agent = std::make_unique<AtomAgent>(
          seat, spec.mode, std::move(backend), TieBreakRule::lexicographic(),
          split_seed(seed, 0x61746f6dULL), spec.eta, spec.raw);
      agent->set_llm_exchange_buffer(exchanges);
      return agent;
    }
  }
  throw ContractError("agent spec: unhandled kind");
}

ExperimentConfig parse_experiment_config_json(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig cfg;
  cfg.env_id = j.value("env", cfg.env_id);
  cfg.layout_text = j.value("layout", "");
  if (j.contains("agents")) {
    cfg.agent1 = parse_agent_spec(j.at("agents").at(0).get<std::string>());
    cfg.agent2 = parse_agent_spec(j.at("agents").at(1).get<std::string>());
  }
  cfg.replications = j.value("reps", cfg.replications);
  cfg.base_seed = j.value("seed", cfg.base_seed);
  if (j.contains("horizon") && !j.at("horizon").is_null()) {
    cfg.horizon = j.at("horizon").get<int>();
  }
  cfg.out_dir = j.value("out", "");
  cfg.workers = j.value("workers", 1);
  if (j.value("order0", "optimistic") == std::string("uniform")) {
    cfg.exact_order0 = Order0Reduction::kUniformPartner;
  }
  if (j.contains("llm")) {
    const json& l = j.at("llm");
    cfg.llm.endpoint = l.value("endpoint", "");
    cfg.llm.model = l.value("model", "");
    cfg.llm.temperature = l.value("temperature", 0.1);
    cfg.llm.max_retries = l.value("max_retries", 3);
    cfg.llm.timeout_seconds = l.value("timeout_s", 30);
    cfg.llm.max_in_flight = l.value("max_in_flight", 4);
    if (l.contains("templates")) {
      const json& t = l.at("templates");
      cfg.llm.templates.system = t.value("system", cfg.llm.templates.system);
      cfg.llm.templates.decision =
          t.value("decision", cfg.llm.templates.decision);
      cfg.llm.templates.decision_with_prediction =
          t.value("decision_with_prediction",
                  cfg.llm.templates.decision_with_prediction);
      cfg.llm.templates.prediction =
          t.value("prediction", cfg.llm.templates.prediction);
    }
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("config: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config_json(buffer.str());
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) {
    throw ContractError("experiment: replications must be >= 1");
  }
  std::unique_ptr<Env> env = make_env(cfg.env_id, cfg.layout_text, cfg.horizon);
  std::shared_ptr<const QOracle> oracle = prepare_oracle(*env, cfg);

  std::vector<EpisodeLog> logs(static_cast<std::size_t>(cfg.replications));
  std::atomic<int> next_rep{0};
  auto worker = [&]() {
    while (true) {
      int rep = next_rep.fetch_add(1);
      if (rep >= cfg.replications) return;
      auto a1 = make_agent(cfg.agent1, PlayerId::p1(), *env, oracle,
                           derive_agent_seed(cfg.base_seed, rep, 0), cfg);
      auto a2 = make_agent(cfg.agent2, PlayerId::p2(), *env, oracle,
                           derive_agent_seed(cfg.base_seed, rep, 1), cfg);
      logs[static_cast<std::size_t>(rep)] =
          run_episode(*env, *a1, *a2,
                      split_seed(cfg.base_seed, static_cast<std::uint64_t>(rep) + 1));
    }
  };
  int n_workers = std::max(1, std::min(cfg.workers, cfg.replications));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  ExperimentResult result;
  result.summary.pairing = cfg.agent1.raw + " vs " + cfg.agent2.raw;
  result.summary.env_name = env->name();

  double point_sum = 0, time_sum = 0;
  int n = 0;
  for (const EpisodeLog& log : logs) {
    if (log.errored) {
      result.summary.errored += 1;
      continue;
    }
    point_sum += log.final_metrics.point;
    time_sum += log.final_metrics.time;
    n += 1;
  }
  result.summary.replications = n;
  if (n > 0) {
    result.summary.point_mean = point_sum / n;
    result.summary.time_mean = time_sum / n;
    double pv = 0, tv = 0;
    for (const EpisodeLog& log : logs) {
      if (log.errored) continue;
      pv += std::pow(log.final_metrics.point - result.summary.point_mean, 2);
      tv += std::pow(log.final_metrics.time - result.summary.time_mean, 2);
    }
    // Population variance, matching "variance in parentheses" reporting.
    result.summary.point_variance = pv / n;
    result.summary.time_variance = tv / n;
  }
  result.logs = std::move(logs);

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    for (std::size_t rep = 0; rep < result.logs.size(); ++rep) {
      std::ostringstream name;
      name << "episode_" << std::setfill('0') << std::setw(3) << rep
           << ".jsonl";
      save_episode_log_file(result.logs[rep],
                            (std::filesystem::path(cfg.out_dir) / name.str())
                                .string());
    }
    std::ofstream out(std::filesystem::path(cfg.out_dir) / "summary.csv");
    write_summary_csv({result.summary}, out);
  }
  return result;
}

void write_summary_csv(const std::vector<PairingSummary>& rows,
                       std::ostream& out) {
  out << "# tomalign-summary-v1\n";
  out << "pairing,env,reps,errored,point_mean,point_variance,time_mean,"
         "time_variance\n";
  out.precision(10);
  for (const PairingSummary& r : rows) {
    out << r.pairing << "," << r.env_name << "," << r.replications << ","
        << r.errored << "," << r.point_mean << "," << r.point_variance << ","
        << r.time_mean << "," << r.time_variance << "\n";
  }
}

std::vector<PairingSummary> read_summary_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "# tomalign-summary-v1") {
    throw ContractError("summary: bad or missing header");
  }
  std::getline(in, line);  // column header
  std::vector<PairingSummary> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = split(line, ',');
    if (f.size() != 8) throw ContractError("summary: bad row");
    PairingSummary r;
    r.pairing = f[0];
    r.env_name = f[1];
    r.replications = std::stoi(f[2]);
    r.errored = std::stoi(f[3]);
    r.point_mean = std::stod(f[4]);
    r.point_variance = std::stod(f[5]);
    r.time_mean = std::stod(f[6]);
    r.time_variance = std::stod(f[7]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace tomalign
