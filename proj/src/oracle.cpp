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

#include "tomalign/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

namespace tomalign {
namespace {

// Legal action lists are required to be the identity ordering [0..n). All
// environments here publish actions that way; the table indexing relies on
// it.
int checked_action_count(const Env& env, const EnvState& s, PlayerId p) {
  std::vector<ActionId> legal = env.legal_actions(s, p);
  for (std::size_t i = 0; i < legal.size(); ++i) {
    if (legal[i].index != static_cast<int>(i)) {
      throw ContractError("oracle: legal action list is not the identity");
    }
  }
  if (legal.empty()) {
    throw ContractError("oracle: empty legal action list in non-terminal");
  }
  return static_cast<int>(legal.size());
}

}  // namespace

double QOracle::lookup(const EnvState& s, JointAction a) const {
  auto it = table.find(s);
  if (it == table.end()) {
    throw ContractError("QOracle: state outside the reachable set");
  }
  const Entry& e = it->second;
  if (e.values.empty()) return 0.0;  // terminal
  if (a.a1.index < 0 || a.a1.index >= e.num_actions1 || a.a2.index < 0 ||
      a.a2.index >= e.num_actions2) {
    throw ContractError("QOracle: joint action out of range");
  }
  return e.values[static_cast<std::size_t>(a.a1.index * e.num_actions2 +
                                           a.a2.index)];
}

double QOracle::max_value(const EnvState& s) const {
  auto it = table.find(s);
  if (it == table.end()) {
    throw ContractError("QOracle: state outside the reachable set");
  }
  const Entry& e = it->second;
  if (e.values.empty()) return 0.0;
  return *std::max_element(e.values.begin(), e.values.end());
}

std::vector<JointAction> QOracle::optimal_joint_actions(
    const EnvState& s, double tolerance) const {
  auto it = table.find(s);
  if (it == table.end()) {
    throw ContractError("QOracle: state outside the reachable set");
  }
  const Entry& e = it->second;
  std::vector<JointAction> out;
  if (e.values.empty()) return out;
  double best = *std::max_element(e.values.begin(), e.values.end());
  for (int i = 0; i < e.num_actions1; ++i) {
    for (int j = 0; j < e.num_actions2; ++j) {
      double v = e.values[static_cast<std::size_t>(i * e.num_actions2 + j)];
      if (best - v <= tolerance) {
        out.push_back(JointAction{ActionId{i}, ActionId{j}});
      }
    }
  }
  return out;
}

QOracle compute_joint_q(const Env& env, int horizon, double gamma,
                        std::size_t state_cap) {
  QOracle oracle;
  oracle.env_name = env.name();
  oracle.horizon = horizon;
  oracle.gamma = gamma;

  // Depth-first evaluation with memoization. The step counter inside every
  // state strictly increases along transitions, so the recursion is over a
  // DAG of depth at most the horizon.
  std::vector<EnvState>& order = oracle.enumeration_order;

  std::function<double(const EnvState&)> value = [&](const EnvState& s) {
    auto it = oracle.table.find(s);
    if (it != oracle.table.end()) {
      const QOracle::Entry& e = it->second;
      if (e.values.empty()) return 0.0;
      return *std::max_element(e.values.begin(), e.values.end());
    }
    if (oracle.table.size() >= state_cap) {
      throw CapacityError("oracle: reachable state count exceeds cap of " +
                          std::to_string(state_cap) + " states");
    }
    if (env.is_terminal(s)) {
      oracle.table.emplace(s, QOracle::Entry{});
      order.push_back(s);
      return 0.0;
    }
    int n1 = checked_action_count(env, s, PlayerId::p1());
    int n2 = checked_action_count(env, s, PlayerId::p2());
    QOracle::Entry entry;
    entry.num_actions1 = n1;
    entry.num_actions2 = n2;
    entry.values.assign(static_cast<std::size_t>(n1 * n2), 0.0);
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n2; ++j) {
        StepOutcome out = env.step(s, JointAction{ActionId{i}, ActionId{j}});
        // Successors are always enumerated so the table covers the full
        // reachable set even when the discount zeroes their contribution.
        double next_best = value(out.next);
        double cont = out.done ? 0.0 : gamma * next_best;
        entry.values[static_cast<std::size_t>(i * n2 + j)] =
            out.reward + cont;
      }
    }
    double best = *std::max_element(entry.values.begin(), entry.values.end());
    oracle.table.emplace(s, std::move(entry));
    order.push_back(s);
    return best;
  };

  value(env.initial_state());
  return oracle;
}

int optimal_joint_time(const Env& env) {
  EnvState start = env.initial_state();
  if (env.is_success(start)) return 0;

  std::unordered_map<EnvState, int, StateHash> depth;
  std::deque<EnvState> queue;
  depth.emplace(start, 0);
  queue.push_back(start);

  while (!queue.empty()) {
    EnvState s = queue.front();
    queue.pop_front();
    int d = depth.at(s);
    if (env.is_terminal(s)) continue;
    int n1 = static_cast<int>(env.legal_actions(s, PlayerId::p1()).size());
    int n2 = static_cast<int>(env.legal_actions(s, PlayerId::p2()).size());
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n2; ++j) {
        StepOutcome out = env.step(s, JointAction{ActionId{i}, ActionId{j}});
        if (env.is_success(out.next)) return d + 1;
        if (depth.emplace(out.next, d + 1).second) {
          queue.push_back(out.next);
        }
      }
    }
  }
  throw UnreachableGoalError("optimal_joint_time: no joint plan reaches " +
                             env.name() + "'s goal within the horizon");
}

void save_q_cache(const QOracle& oracle, const Env& env, std::ostream& out) {
  out << "# tomalign-qcache-v1\n";
  out << "# env=" << oracle.env_name << " horizon=" << oracle.horizon
      << " gamma=" << oracle.gamma
      << " states=" << oracle.enumeration_order.size() << "\n";
  out.precision(17);
  for (const EnvState& s : oracle.enumeration_order) {
    const QOracle::Entry& e = oracle.table.at(s);
    out << env.encode_state_text(s) << "\t" << e.num_actions1 << "\t"
        << e.num_actions2;
    for (double v : e.values) out << "\t" << v;
    out << "\n";
  }
}

QOracle load_q_cache(const Env& env, std::istream& in,
                     std::size_t state_cap) {
  std::string magic;
  if (!std::getline(in, magic) || magic != "# tomalign-qcache-v1") {
    throw ContractError("q cache: bad or missing header");
  }
  std::string meta;
  if (!std::getline(in, meta)) throw ContractError("q cache: truncated");

  QOracle oracle;
  oracle.env_name = env.name();
  {
    std::istringstream ms(meta);
    std::string hash, kv;
    ms >> hash;
    while (ms >> kv) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) continue;
      std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      if (key == "env" && val != env.name()) {
        throw ContractError("q cache: written for environment '" + val +
                            "', not '" + env.name() + "'");
      }
      if (key == "horizon") oracle.horizon = std::stoi(val);
      if (key == "gamma") oracle.gamma = std::stod(val);
    }
  }

  std::unordered_map<std::string, QOracle::Entry> by_text;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ContractError("q cache: bad line");
    std::string text = line.substr(0, tab);
    std::istringstream rest(line.substr(tab + 1));
    QOracle::Entry e;
    rest >> e.num_actions1 >> e.num_actions2;
    double v;
    while (rest >> v) e.values.push_back(v);
    if (e.num_actions1 * e.num_actions2 !=
        static_cast<int>(e.values.size())) {
      throw ContractError("q cache: value count mismatch for state: " + text);
    }
    by_text.emplace(std::move(text), std::move(e));
  }

  // Re-enumerate reachable states and key them back by canonical text.
  std::deque<EnvState> queue;
  queue.push_back(env.initial_state());
  std::unordered_map<EnvState, bool, StateHash> seen;
  seen.emplace(queue.front(), true);
  while (!queue.empty()) {
    EnvState s = queue.front();
    queue.pop_front();
    if (oracle.table.size() >= state_cap) {
      throw CapacityError("q cache: reachable state count exceeds cap of " +
                          std::to_string(state_cap) + " states");
    }
    auto it = by_text.find(env.encode_state_text(s));
    if (it == by_text.end()) {
      throw ContractError("q cache: missing entry for reachable state: " +
                          env.encode_state_text(s));
    }
    oracle.table.emplace(s, it->second);
    oracle.enumeration_order.push_back(s);
    if (env.is_terminal(s)) continue;
    int n1 = static_cast<int>(env.legal_actions(s, PlayerId::p1()).size());
    int n2 = static_cast<int>(env.legal_actions(s, PlayerId::p2()).size());
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n2; ++j) {
        StepOutcome out = env.step(s, JointAction{ActionId{i}, ActionId{j}});
        if (seen.emplace(out.next, true).second) queue.push_back(out.next);
      }
    }
  }
  return oracle;
}

void save_q_cache_file(const QOracle& oracle, const Env& env,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ContractError("q cache: cannot open " + path);
  save_q_cache(oracle, env, out);
}

QOracle load_q_cache_file(const Env& env, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("q cache: cannot open " + path);
  return load_q_cache(env, in);
}

}  // namespace tomalign
