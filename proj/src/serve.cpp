#include "skyfleet/serve.hpp"

#include <iostream>

#include <json.hpp>

#include "skyfleet/scenario.hpp"

namespace skyfleet {

using nlohmann::json;

namespace {

json error_reply(const std::string& message) { return json{{"error", message}}; }

double epoch_coverage_pct(const Env& env) {
  const auto& log = env.coverage_log();
  const auto users = env.users().size();
  if (log.empty() || users == 0) return 0.0;
  double sum = 0.0;
  for (const auto& ids : log) sum += 100.0 * static_cast<double>(ids.size()) / static_cast<double>(users);
  return sum / static_cast<double>(log.size());
}

}  // namespace

ServeSession::ServeSession(ScenarioConfig config) : config_(std::move(config)) { validate(config_); }

std::string ServeSession::handle_line(const std::string& line) {
  json req;
  try {
    req = json::parse(line);
  } catch (const json::parse_error& e) {
    return error_reply(std::string("malformed request: ") + e.what()).dump();
  }
  if (!req.is_object() || !req.contains("cmd") || !req["cmd"].is_string()) {
    return error_reply("request must be an object with a string 'cmd'").dump();
  }

  try {
    const auto cmd = req["cmd"].get<std::string>();
    if (cmd == "close") {
      closed_ = true;
      return json{{"closed", true}}.dump();
    }

    if (cmd == "reset") {
      auto config = config_;
      if (req.contains("seed")) config.seed = req["seed"].get<std::uint64_t>();
      env_ = std::make_unique<Env>(generate_scenario(config));
      epoch_ = 0;
      epoch_done_ = false;
      const auto obs = env_->reset(epoch_);
      return json{{"obs", obs}, {"n_agents", obs.size()}}.dump();
    }

    if (cmd == "spec") {
      const Env& env = env_ ? *env_ : Env(generate_scenario(config_));
      const auto n_actions = static_cast<int>(env.actions().size());
      json valid = json::array();
      json names = json::array();
      for (int c = 0; c < n_actions; ++c) names.push_back(to_string(env.actions()[static_cast<std::size_t>(c)]));
      for (int i = 0; i < env.config().num_uavs; ++i) {
        json cols = json::array();
        for (int c = 0; c < n_actions; ++c) cols.push_back(c);
        valid.push_back(cols);
      }
      return json{{"n_states", env.state_space().size()},
                  {"n_actions", n_actions},
                  {"n_agents", env.config().num_uavs},
                  {"valid_actions", valid},
                  {"action_names", names}}
          .dump();
    }

    if (cmd == "step") {
      if (!env_) return error_reply("step before reset").dump();
      if (!req.contains("actions") || !req["actions"].is_array()) return error_reply("'actions' must be an array").dump();
      const auto& acts = req["actions"];
      const auto n_agents = static_cast<std::size_t>(env_->config().num_uavs);
      if (acts.size() != n_agents) {
        return error_reply("expected " + std::to_string(n_agents) + " actions, got " + std::to_string(acts.size()))
            .dump();
      }
      const auto set = env_->actions();
      std::vector<ActionId> requested;
      for (const auto& a : acts) {
        if (!a.is_number_integer()) return error_reply("actions must be integers").dump();
        const auto col = a.get<long long>();
        if (col < 0 || col >= static_cast<long long>(set.size())) {
          return error_reply("action " + std::to_string(col) + " out of range").dump();
        }
        requested.push_back(set[static_cast<std::size_t>(col)]);
      }

      if (epoch_done_) {
        env_->reset(++epoch_);
        epoch_done_ = false;
      }
      const auto out = env_->step(requested);
      epoch_done_ = out.epoch_done;

      std::vector<int> obs;
      std::vector<double> rewards;
      for (const auto& a : out.agents) {
        obs.push_back(a.next_state);
        rewards.push_back(a.reward);
      }
      return json{{"obs", obs},
                  {"rewards", rewards},
                  {"done", out.epoch_done},
                  {"info", {{"qoe3", epoch_coverage_pct(*env_)}, {"crashes", env_->total_crashes()}}}}
          .dump();
    }

    return error_reply("unknown cmd '" + cmd + "'").dump();
  } catch (const std::exception& e) {
    return error_reply(e.what()).dump();
  }
}

int run_serve_loop(ServeSession& session) {
  std::string line;
  while (!session.closed() && std::getline(std::cin, line)) {
    if (line.empty()) continue;
    std::cout << session.handle_line(line) << '\n' << std::flush;
  }
  return 0;
}

}  // namespace skyfleet
