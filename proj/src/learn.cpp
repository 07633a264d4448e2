#include "skyfleet/learn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "skyfleet/errors.hpp"
#include "skyfleet/io.hpp"

namespace skyfleet {

QTable::QTable(int num_states, int num_actions, QTableInit init, double fill)
    : num_states_(num_states),
      num_actions_(num_actions),
      init_(init),
      values_(static_cast<std::size_t>(num_states) * static_cast<std::size_t>(num_actions), fill) {
  if (num_states <= 0 || num_actions <= 0) throw std::invalid_argument("QTable dimensions must be positive");
}

QTable init_qtable(int num_states, int num_actions, QTableInit strategy, Rng& rng, const std::string& prior_path) {
  switch (strategy) {
    case QTableInit::Zero: return QTable(num_states, num_actions, strategy, 0.0);
    case QTableInit::MaxReward: return QTable(num_states, num_actions, strategy, 1.0);
    case QTableInit::Random: {
      QTable q(num_states, num_actions, strategy);
      for (auto& v : q.values()) v = rng.uniform();
      return q;
    }
    case QTableInit::Prior: {
      if (prior_path.empty()) throw IoError("prior initialization needs a Q-table file");
      QTable q = load_qtable(prior_path);
      if (q.num_states() != num_states || q.num_actions() != num_actions) {
        throw IoError(fmt::format("prior Q-table '{}' is {}x{}, expected {}x{}", prior_path, q.num_states(),
                                  q.num_actions(), num_states, num_actions));
      }
      return q;
    }
  }
  throw std::invalid_argument("unknown Q-table initialization");
}

Hyperparams Hyperparams::from(const ScenarioConfig& config) {
  Hyperparams hp;
  hp.alpha = config.rl.alpha;
  hp.gamma = config.rl.gamma;
  hp.epsilon_start = config.rl.epsilon_start;
  hp.epsilon_end = config.rl.epsilon_end;
  hp.epsilon_decay_epochs = config.epsilon_decay_epochs();
  return hp;
}

double Hyperparams::epsilon_at(int epoch) const {
  if (epsilon_decay_epochs <= 0) return epsilon_end;
  const double frac = std::min(1.0, static_cast<double>(epoch) / epsilon_decay_epochs);
  return epsilon_start + (epsilon_end - epsilon_start) * frac;
}

namespace {

bool valid(std::span<const bool> mask, int a) { return mask.empty() || mask[static_cast<std::size_t>(a)]; }

double best_value(const QTable& q, int s, std::span<const bool> mask) {
  double best = -INFINITY;
  for (int a = 0; a < q.num_actions(); ++a) {
    if (valid(mask, a)) best = std::max(best, q.at(s, a));
  }
  return best;
}

}  // namespace

int select_action(const QTable& q, int state, double epsilon, Rng& rng, std::span<const bool> valid_mask) {
  if (epsilon > 0.0 && rng.uniform() < epsilon) {
    std::vector<int> choices;
    for (int a = 0; a < q.num_actions(); ++a) {
      if (valid(valid_mask, a)) choices.push_back(a);
    }
    if (choices.empty()) throw std::invalid_argument("select_action needs at least one valid action");
    return choices[rng.below(choices.size())];
  }
  int best = -1;
  for (int a = 0; a < q.num_actions(); ++a) {
    if (!valid(valid_mask, a)) continue;
    if (best < 0 || q.at(state, a) > q.at(state, best)) best = a;
  }
  if (best < 0) throw std::invalid_argument("select_action needs at least one valid action");
  return best;
}

void q_update(QTable& q, int s, int a, double r, int s_next, const Hyperparams& hp, std::span<const bool> valid_mask) {
  const double target = s_next < 0 ? r : r + hp.gamma * best_value(q, s_next, valid_mask);
  q.at(s, a) += hp.alpha * (target - q.at(s, a));
}

void sarsa_update(QTable& q, int s, int a, double r, int s_next, int a_next, const Hyperparams& hp) {
  const double target = s_next < 0 ? r : r + hp.gamma * q.at(s_next, a_next);
  q.at(s, a) += hp.alpha * (target - q.at(s, a));
}

const char* to_string(Algorithm a) { return a == Algorithm::QLearning ? "qlearning" : "sarsa"; }

int action_column(std::span<const ActionId> actions, ActionId action) {
  const auto it = std::find(actions.begin(), actions.end(), action);
  return it == actions.end() ? -1 : static_cast<int>(it - actions.begin());
}

namespace {

// Forced column for agents committed to a station, or -1 when free to choose.
int forced_column(const UavAgent& a, std::span<const ActionId> actions) {
  if (a.mode == AgentMode::ToCs) return action_column(actions, ActionId::GotoCs);
  if (a.mode == AgentMode::Charging) return action_column(actions, ActionId::Charge);
  return -1;
}

QoEReport epoch_report(const Env& env, int epoch, const std::vector<double>& reward_sums, double epsilon) {
  auto r = compute_qoe(env.users(), env.coverage_log(), EpochWindow{epoch, env.epoch_start(), env.now()});
  r.crashes = env.total_crashes();
  r.epsilon = epsilon;
  const double iters = static_cast<double>(env.now() - env.epoch_start());
  for (double sum : reward_sums) r.mean_reward.push_back(iters > 0 ? sum / iters : 0.0);
  return r;
}

struct EpochRunner {
  Env& env;
  std::vector<QTable>& tables;
  std::vector<Rng>& rngs;
  const Hyperparams& hp;
  bool learn;
  Algorithm algo;

  QoEReport run(int epoch, double epsilon, const StepHook& hook) {
    const auto actions = env.actions();
    const auto n = tables.size();
    std::vector<int> state = env.reset(epoch);
    std::vector<int> chosen(n, -1);
    std::vector<double> reward_sums(n, 0.0);

    auto choose = [&](std::size_t i, int s) {
      const int forced = forced_column(env.agents()[i], actions);
      return forced >= 0 ? forced : select_action(tables[i], s, epsilon, rngs[i]);
    };
    for (std::size_t i = 0; i < n; ++i) {
      if (state[i] >= 0) chosen[i] = choose(i, state[i]);
    }

    std::vector<ActionId> requested(n, ActionId::Hover);
    const int iterations = env.config().timing.epoch_iterations;
    for (int t = 0; t < iterations; ++t) {
      for (std::size_t i = 0; i < n; ++i) {
        if (state[i] >= 0 && algo == Algorithm::QLearning && t > 0) chosen[i] = choose(i, state[i]);
        requested[i] = state[i] >= 0 ? actions[static_cast<std::size_t>(chosen[i])] : ActionId::Hover;
      }
      const StepOutcome out = env.step(requested);
      if (hook) hook(epoch, env, out);

      for (std::size_t i = 0; i < n; ++i) {
        if (state[i] < 0) continue;
        const auto& rec = out.agents[i];
        reward_sums[i] += rec.reward;
        const int next = rec.next_state;
        if (algo == Algorithm::QLearning) {
          if (learn) q_update(tables[i], state[i], chosen[i], rec.reward, next, hp);
        } else {
          const int next_action = next >= 0 ? choose(i, next) : -1;
          if (learn) sarsa_update(tables[i], state[i], chosen[i], rec.reward, next, next_action, hp);
          chosen[i] = next_action;
        }
        state[i] = next;
      }
    }
    return epoch_report(env, epoch, reward_sums, epsilon);
  }
};

}  // namespace

TrainingResult train(const Scenario& scenario, Algorithm algo, const Hyperparams& hp, int epochs,
                     const StepHook& hook, const std::vector<QTable>* initial) {
  Env env(scenario);
  const int n = scenario.config.num_uavs;
  TrainingResult result;
  std::vector<Rng> rngs;
  for (int i = 0; i < n; ++i) {
    rngs.emplace_back(scenario.config.seed, Stream::Learning, static_cast<std::uint64_t>(1 + i));
  }
  if (initial) {
    result.tables = *initial;
  } else {
    for (int i = 0; i < n; ++i) {
      Rng init_rng(scenario.config.seed, Stream::Learning, static_cast<std::uint64_t>(1000 + i));
      result.tables.push_back(init_qtable(env.state_space().size(), static_cast<int>(env.actions().size()),
                                          scenario.config.rl.qtable_init, init_rng, scenario.config.rl.prior_path));
    }
  }
  EpochRunner runner{env, result.tables, rngs, hp, true, algo};
  for (int e = 0; e < epochs; ++e) result.logs.push_back(runner.run(e, hp.epsilon_at(e), hook));
  result.invalid_actions = env.invalid_actions();
  return result;
}

std::vector<QoEReport> evaluate(const Scenario& scenario, const std::vector<QTable>& tables, int epochs,
                                double epsilon, const StepHook& hook) {
  Env env(scenario);
  if (static_cast<int>(tables.size()) != scenario.config.num_uavs) {
    throw std::invalid_argument(
        fmt::format("{} Q-tables supplied for {} UAVs", tables.size(), scenario.config.num_uavs));
  }
  for (const auto& q : tables) {
    if (q.num_states() != env.state_space().size() || q.num_actions() != static_cast<int>(env.actions().size())) {
      throw std::invalid_argument(fmt::format("Q-table is {}x{}, environment needs {}x{}", q.num_states(),
                                              q.num_actions(), env.state_space().size(), env.actions().size()));
    }
  }
  std::vector<QTable> frozen = tables;
  std::vector<Rng> rngs;
  for (int i = 0; i < scenario.config.num_uavs; ++i) {
    rngs.emplace_back(scenario.config.seed, Stream::Learning, static_cast<std::uint64_t>(1 + i));
  }
  Hyperparams hp;
  EpochRunner runner{env, frozen, rngs, hp, false, Algorithm::QLearning};
  std::vector<QoEReport> logs;
  for (int e = 0; e < epochs; ++e) logs.push_back(runner.run(e, epsilon, hook));
  return logs;
}

}  // namespace skyfleet
