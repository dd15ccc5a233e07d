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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "tomalign/experiment.hpp"
#include "tomalign/oracle.hpp"

namespace fs = std::filesystem;
using namespace tomalign;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// "tom1 vs atom-ftl" -> two agent specs.
void apply_pairing(ExperimentConfig& cfg, const std::string& pairing) {
  auto at = pairing.find(" vs ");
  if (at == std::string::npos) {
    throw ContractError("pairing must look like '<agent> vs <agent>'");
  }
  cfg.agent1 = parse_agent_spec(pairing.substr(0, at));
  cfg.agent2 = parse_agent_spec(pairing.substr(at + 4));
}

std::vector<EpisodeLog> collect_logs(const std::vector<std::string>& paths) {
  std::vector<EpisodeLog> logs;
  for (const std::string& path : paths) {
    if (fs::is_directory(path)) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(path)) {
        if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      for (const fs::path& f : files) {
        logs.push_back(load_episode_log_file(f.string()));
      }
    } else {
      logs.push_back(load_episode_log_file(path));
    }
  }
  return logs;
}

int cmd_run(const std::string& config_path, const std::string& env_id,
            const std::string& layout_path, const std::string& pairing,
            int reps, std::int64_t seed, const std::string& out_dir,
            int workers, int horizon) {
  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = load_experiment_config(config_path);
  if (!env_id.empty()) cfg.env_id = env_id;
  if (!layout_path.empty()) cfg.layout_text = read_file(layout_path);
  if (!pairing.empty()) apply_pairing(cfg, pairing);
  if (reps > 0) cfg.replications = reps;
  if (seed >= 0) cfg.base_seed = static_cast<std::uint64_t>(seed);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (workers > 0) cfg.workers = workers;
  if (horizon > 0) cfg.horizon = horizon;

  ExperimentResult result = run_experiment(cfg);
  write_summary_csv({result.summary}, std::cout);
  if (result.summary.errored > 0) {
    std::cerr << result.summary.errored
              << " episode(s) aborted on backend errors and were excluded\n";
  }
  if (!cfg.out_dir.empty()) {
    std::cerr << "episode logs and summary written to " << cfg.out_dir << "\n";
  }
  return 0;
}

int cmd_table(const std::vector<std::string>& inputs,
              const std::string& out_path) {
  std::vector<EpisodeLog> logs = collect_logs(inputs);
  if (logs.empty()) {
    std::cerr << "no episode logs found\n";
    return 1;
  }
  struct Group {
    std::vector<const EpisodeLog*> members;
  };
  std::map<std::pair<std::string, std::string>, Group> groups;
  for (const EpisodeLog& log : logs) {
    groups[{log.env_name, log.agents[0] + " vs " + log.agents[1]}]
        .members.push_back(&log);
  }
  auto summarize = [](const std::string& env_name, const std::string& pairing,
                      const std::vector<const EpisodeLog*>& members) {
    PairingSummary row;
    row.env_name = env_name;
    row.pairing = pairing;
    double point_sum = 0, time_sum = 0;
    int n = 0;
    for (const EpisodeLog* log : members) {
      if (log->errored) {
        row.errored += 1;
        continue;
      }
      point_sum += log->final_metrics.point;
      time_sum += log->final_metrics.time;
      ++n;
    }
    row.replications = n;
    if (n > 0) {
      row.point_mean = point_sum / n;
      row.time_mean = time_sum / n;
      double pv = 0, tv = 0;
      for (const EpisodeLog* log : members) {
        if (log->errored) continue;
        pv += (log->final_metrics.point - row.point_mean) *
              (log->final_metrics.point - row.point_mean);
        tv += (log->final_metrics.time - row.time_mean) *
              (log->final_metrics.time - row.time_mean);
      }
      row.point_variance = pv / n;
      row.time_variance = tv / n;
    }
    return row;
  };

  std::vector<PairingSummary> rows;
  for (const auto& [key, group] : groups) {
    rows.push_back(summarize(key.first, key.second, group.members));
  }
  // Pooled view per agent kind across every pairing it appears in, in
  // either seat. The per-pairing rows above stay the primary report.
  std::map<std::pair<std::string, std::string>, Group> pooled;
  for (const EpisodeLog& log : logs) {
    pooled[{log.env_name, log.agents[0]}].members.push_back(&log);
    if (log.agents[1] != log.agents[0]) {
      pooled[{log.env_name, log.agents[1]}].members.push_back(&log);
    }
  }
  for (const auto& [key, group] : pooled) {
    rows.push_back(
        summarize(key.first, key.second + " (pooled)", group.members));
  }
  if (out_path.empty()) {
    write_summary_csv(rows, std::cout);
  } else {
    std::ofstream out(out_path);
    write_summary_csv(rows, out);
    std::cerr << "summary written to " << out_path << "\n";
  }
  return 0;
}

int cmd_weights(const std::vector<std::string>& inputs, int seat,
                const std::string& out_path) {
  std::vector<EpisodeLog> logs = collect_logs(inputs);
  std::vector<std::vector<double>> series =
      aggregate_weights(logs, PlayerId(seat));
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    out = &file;
  }
  *out << "# tomalign-weights-v1\n";
  *out << "step";
  std::size_t orders = series.empty() ? 0 : series.front().size();
  for (std::size_t k = 0; k < orders; ++k) *out << ",P" << k;
  *out << "\n";
  out->precision(10);
  for (std::size_t t = 0; t < series.size(); ++t) {
    *out << t;
    for (double v : series[t]) *out << "," << v;
    *out << "\n";
  }
  return 0;
}

int cmd_replay(const std::string& log_path) {
  EpisodeLog log = load_episode_log_file(log_path);
  std::unique_ptr<Env> env = make_env(log.env_name, log.layout_text);
  ReplayReport report = replay(*env, log);
  std::cout << (report.matched ? "MATCH" : "DIVERGENCE") << ": "
            << report.message << "\n";
  return report.matched ? 0 : 1;
}

int cmd_play(const std::string& env_id, const std::string& layout_path,
             const std::string& partner_spec, int human_seat,
             std::int64_t seed, const std::string& out_path) {
  ExperimentConfig cfg;
  cfg.env_id = env_id;
  if (!layout_path.empty()) cfg.layout_text = read_file(layout_path);
  AgentSpec partner = parse_agent_spec(partner_spec);
  cfg.agent1 = human_seat == 1 ? parse_agent_spec("human") : partner;
  cfg.agent2 = human_seat == 1 ? partner : parse_agent_spec("human");
  std::unique_ptr<Env> env = make_env(cfg.env_id, cfg.layout_text);
  std::shared_ptr<const QOracle> oracle = prepare_oracle(*env, cfg);
  PlayerId human(human_seat);
  std::uint64_t base = seed >= 0 ? static_cast<std::uint64_t>(seed) : 42;
  std::unique_ptr<Agent> agent =
      make_agent(partner, human.partner(), *env, oracle,
                 derive_agent_seed(base, 0, human.partner().slot()), cfg);
  EpisodeLog log = human_play(*env, *agent, human, std::cin, std::cout);
  if (!out_path.empty()) {
    save_episode_log_file(log, out_path);
    std::cout << "episode log written to " << out_path << "\n";
  }
  return 0;
}

int cmd_cache_q(const std::string& env_id, const std::string& layout_path,
                int horizon, const std::string& out_path) {
  std::string layout_text =
      layout_path.empty() ? "" : read_file(layout_path);
  std::unique_ptr<Env> env =
      make_env(env_id, layout_text,
               horizon > 0 ? std::optional<int>(horizon) : std::nullopt);
  QOracle oracle = compute_joint_q(*env, env->horizon(), env->discount());
  save_q_cache_file(oracle, *env, out_path);
  std::cout << "cached " << oracle.table.size() << " states for "
            << env->name() << " to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Two-player cooperative coordination simulator with recursive "
      "partner-modeling agents and adaptive order alignment"};
  app.require_subcommand(1);

  // run
  std::string run_config, run_env, run_layout, run_pairing, run_out;
  int run_reps = 0, run_workers = 0, run_horizon = 0;
  std::int64_t run_seed = -1;
  CLI::App* run = app.add_subcommand("run", "run an experiment");
  run->add_option("config", run_config, "experiment config file (json)");
  run->add_option("--env", run_env, "environment id");
  run->add_option("--layout", run_layout, "layout map file");
  run->add_option("--pairing", run_pairing, "'<agent> vs <agent>'");
  run->add_option("--reps", run_reps, "replications");
  run->add_option("--seed", run_seed, "base seed");
  run->add_option("--out", run_out, "output directory");
  run->add_option("--workers", run_workers, "concurrent episodes");
  run->add_option("--horizon", run_horizon, "step cap override");

  // table
  std::vector<std::string> table_inputs;
  std::string table_out;
  CLI::App* table =
      app.add_subcommand("table", "aggregate episode logs into a summary");
  table->add_option("logs", table_inputs, "episode logs or directories")
      ->required();
  table->add_option("--out", table_out, "output csv path");

  // weights
  std::vector<std::string> weights_inputs;
  std::string weights_out;
  int weights_seat = 1;
  CLI::App* weights = app.add_subcommand(
      "weights", "emit per-step mean expert-weight trajectories");
  weights->add_option("logs", weights_inputs, "episode logs or directories")
      ->required();
  weights->add_option("--seat", weights_seat, "adaptive agent's seat (1 or 2)")
      ->check(CLI::Range(1, 2));
  weights->add_option("--out", weights_out, "output csv path");

  // replay
  std::string replay_log;
  CLI::App* replay_cmd =
      app.add_subcommand("replay", "re-simulate a log and verify it");
  replay_cmd->add_option("log", replay_log, "episode log path")->required();

  // play
  std::string play_env = "matrix-m1-2", play_layout, play_partner = "atom-ftl",
              play_out;
  int play_seat = 1;
  std::int64_t play_seed = -1;
  CLI::App* play = app.add_subcommand("play", "play interactively");
  play->add_option("--env", play_env, "environment id");
  play->add_option("--layout", play_layout, "layout map file");
  play->add_option("--partner", play_partner, "partner agent spec");
  play->add_option("--seat", play_seat, "your seat (1 or 2)")
      ->check(CLI::Range(1, 2));
  play->add_option("--seed", play_seed, "base seed");
  play->add_option("--out", play_out, "write the episode log here");

  // cache-q
  std::string cache_env = "matrix-m1-2", cache_layout, cache_out;
  int cache_horizon = 0;
  CLI::App* cache =
      app.add_subcommand("cache-q", "precompute and save a joint value table");
  cache->add_option("--env", cache_env, "environment id");
  cache->add_option("--layout", cache_layout, "layout map file");
  cache->add_option("--horizon", cache_horizon, "horizon override");
  cache->add_option("--out", cache_out, "cache file path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(run_config, run_env, run_layout, run_pairing, run_reps,
                     run_seed, run_out, run_workers, run_horizon);
    }
    if (table->parsed()) return cmd_table(table_inputs, table_out);
    if (weights->parsed()) {
      return cmd_weights(weights_inputs, weights_seat, weights_out);
    }
    if (replay_cmd->parsed()) return cmd_replay(replay_log);
    if (play->parsed()) {
      return cmd_play(play_env, play_layout, play_partner, play_seat,
                      play_seed, play_out);
    }
    if (cache->parsed()) {
      return cmd_cache_q(cache_env, cache_layout, cache_horizon, cache_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
