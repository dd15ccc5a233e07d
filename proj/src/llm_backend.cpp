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

#include "tomalign/llm_backend.hpp"

#include <cctype>
#include <condition_variable>
#include <cstdlib>
#include <memory>
#include <mutex>

#include "httplib.h"
#include "json.hpp"

namespace tomalign {
namespace {

using nlohmann::json;

std::string replace_all(std::string text, const std::string& key,
                        const std::string& value) {
  std::size_t at = 0;
  while ((at = text.find(key, at)) != std::string::npos) {
    text.replace(at, key.size(), value);
    at += value.size();
  }
  return text;
}

// Splits an endpoint URL into (scheme://host[:port], path).
std::pair<std::string, std::string> split_endpoint(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ContractError("llm: endpoint must be a full URL: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

// Global cap on in-flight requests, shared by all episodes in the process.
class InFlightGate {
 public:
  explicit InFlightGate(int cap) : cap_(cap) {}
  void acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return active_ < cap_; });
    ++active_;
  }
  void release() {
    std::lock_guard lock(mu_);
    --active_;
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int cap_;
  int active_ = 0;
};

InFlightGate& gate_for(int cap) {
  static InFlightGate gate(cap > 0 ? cap : 1);
  return gate;
}

}  // namespace

std::string render_prompt(const std::string& tmpl, const Env& env,
                          const EnvState& s, PlayerId p,
                          std::optional<ActionId> predicted_partner,
                          const std::vector<ActionId>& legal) {
  std::string actions;
  for (std::size_t i = 0; i < legal.size(); ++i) {
    if (i > 0) actions += ", ";
    actions += env.action_name(p, legal[i]);
  }
  std::string text = replace_all(tmpl, "{state}", env.encode_state_text(s, p));
  text = replace_all(text, "{actions}", actions);
  if (predicted_partner) {
    text = replace_all(text, "{partner}",
                       env.action_name(p.partner(), *predicted_partner));
  }
  return text;
}

std::optional<ActionId> parse_action_reply(const std::string& reply,
                                           const Env& env, PlayerId p,
                                           const std::vector<ActionId>& legal) {
  std::vector<std::string> names;
  names.reserve(legal.size());
  for (ActionId a : legal) names.push_back(env.action_name(p, a));

  auto matches = [&](const std::string& token, const std::string& name) {
    if (token.size() != name.size()) return false;
    if (name.size() == 1) return token == name;  // exact for single letters
    for (std::size_t i = 0; i < name.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(token[i])) !=
          std::tolower(static_cast<unsigned char>(name[i]))) {
        return false;
      }
    }
    return true;
  };

  std::string token;
  auto flush = [&]() -> std::optional<ActionId> {
    std::optional<ActionId> hit;
    for (std::size_t i = 0; i < names.size() && !token.empty(); ++i) {
      if (matches(token, names[i])) {
        hit = legal[i];
        break;
      }
    }
    token.clear();
    return hit;
  };
  for (char c : reply) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      token += c;
    } else {
      if (auto hit = flush()) return hit;
    }
  }
  return flush();
}

ActionId llm_decide(const LlmBackendConfig& config, const Env& env,
                    const EnvState& s, PlayerId p,
                    std::optional<ActionId> predicted_partner,
                    const std::vector<ActionId>& legal,
                    const LlmLogger& logger) {
  if (legal.empty()) throw ContractError("llm_decide: no legal actions");
  if (config.endpoint.empty()) {
    throw ContractError("llm_decide: endpoint not configured");
  }

  const std::string& tmpl =
      predicted_partner ? config.templates.decision_with_prediction
                        : config.templates.decision;
  std::string prompt =
      render_prompt(tmpl, env, s, p, predicted_partner, legal);

  json body{
      {"model", config.model},
      {"temperature", config.temperature},
      {"messages",
       json::array(
           {json{{"role", "system"}, {"content", config.templates.system}},
            json{{"role", "user"}, {"content", prompt}}})},
  };
  std::string body_text = body.dump();

  auto [host, path] = split_endpoint(config.endpoint);
  httplib::Client client(host);
  client.set_connection_timeout(config.timeout_seconds, 0);
  client.set_read_timeout(config.timeout_seconds, 0);
  httplib::Headers headers;
  if (const char* key = std::getenv(config.api_key_env.c_str());
      key != nullptr && key[0] != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  InFlightGate& gate = gate_for(config.max_in_flight);
  int attempts = config.max_retries + 1;
  bool reached_server = false;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    gate.acquire();
    httplib::Result res =
        client.Post(path, headers, body_text, "application/json");
    gate.release();

    LlmExchange exchange;
    exchange.request_body = body_text;
    if (!res || res->status != 200) {
      exchange.response_body =
          res ? "HTTP " + std::to_string(res->status) : "connection error";
      if (logger) logger(exchange);
      continue;  // network failures burn the same retry budget
    }
    reached_server = true;
    exchange.response_body = res->body;

    std::string reply;
    try {
      json parsed = json::parse(res->body);
      reply = parsed.at("choices").at(0).at("message").at("content")
                  .get<std::string>();
    } catch (const json::exception&) {
      if (logger) logger(exchange);
      continue;  // malformed completion counts as a parse failure
    }
    std::optional<ActionId> action = parse_action_reply(reply, env, p, legal);
    exchange.parsed_ok = action.has_value();
    if (logger) logger(exchange);
    if (action) return *action;
  }

  if (!reached_server) {
    throw BackendUnavailableError("llm_decide: endpoint " + config.endpoint +
                                  " unreachable after " +
                                  std::to_string(attempts) + " attempts");
  }
  // The model answered but never named a legal action; fall back to the
  // lexicographically first legal action. The exchanges above are already
  // logged with parsed_ok = false.
  ActionId fallback = legal.front();
  for (ActionId a : legal) fallback = std::min(fallback, a);
  return fallback;
}

}  // namespace tomalign
