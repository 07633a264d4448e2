#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "skyfleet/config.hpp"
#include "skyfleet/env.hpp"
#include "skyfleet/metrics.hpp"
#include "skyfleet/rng.hpp"

namespace skyfleet {

/// Dense state x action value table, row-major.
class QTable {
 public:
  QTable() = default;
  QTable(int num_states, int num_actions, QTableInit init = QTableInit::Zero, double fill = 0.0);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  QTableInit init_strategy() const { return init_; }

  double& at(int s, int a) { return values_[index(s, a)]; }
  double at(int s, int a) const { return values_[index(s, a)]; }
  std::span<const double> row(int s) const {
    return std::span<const double>(values_).subspan(index(s, 0), static_cast<std::size_t>(num_actions_));
  }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  std::size_t index(int s, int a) const {
    return static_cast<std::size_t>(s) * static_cast<std::size_t>(num_actions_) + static_cast<std::size_t>(a);
  }

  int num_states_ = 0;
  int num_actions_ = 0;
  QTableInit init_ = QTableInit::Zero;
  std::vector<double> values_;
};

/// Zero, i.i.d. uniform [0, 1), all-ones (the clamped per-step reward
/// ceiling), or a table loaded from `prior_path`.
QTable init_qtable(int num_states, int num_actions, QTableInit strategy, Rng& rng,
                   const std::string& prior_path = {});

struct Hyperparams {
  double alpha = 0.1;
  double gamma = 0.9;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  int epsilon_decay_epochs = 0;

  static Hyperparams from(const ScenarioConfig& config);
  /// Linear decay from start to end over epsilon_decay_epochs, then flat.
  double epsilon_at(int epoch) const;
};

/// Epsilon-greedy column choice. Greedy ties go to the lowest column. An empty
/// mask means every column is valid. No random number is drawn when
/// epsilon == 0.
int select_action(const QTable& q, int state, double epsilon, Rng& rng, std::span<const bool> valid_mask = {});

/// Q(s,a) += alpha (r + gamma max_b Q(s',b) - Q(s,a)); s_next < 0 marks a
/// terminal transition.
void q_update(QTable& q, int s, int a, double r, int s_next, const Hyperparams& hp,
              std::span<const bool> valid_mask = {});

/// Q(s,a) += alpha (r + gamma Q(s',a') - Q(s,a)); s_next < 0 marks a terminal
/// transition.
void sarsa_update(QTable& q, int s, int a, double r, int s_next, int a_next, const Hyperparams& hp);

enum class Algorithm { QLearning, Sarsa };

const char* to_string(Algorithm a);

struct TrainingResult {
  std::vector<QTable> tables;
  std::vector<QoEReport> logs;
  int invalid_actions = 0;
};

/// Called after every environment step with the epoch index.
using StepHook = std::function<void(int epoch, const Env& env, const StepOutcome& outcome)>;

/// Trains one private Q-table per agent over `epochs` epochs. Tables start
/// from `initial` when given.
TrainingResult train(const Scenario& scenario, Algorithm algo, const Hyperparams& hp, int epochs,
                     const StepHook& hook = {}, const std::vector<QTable>* initial = nullptr);

/// Runs `epochs` frozen epochs with the given epsilon (0 for greedy).
std::vector<QoEReport> evaluate(const Scenario& scenario, const std::vector<QTable>& tables, int epochs,
                                double epsilon = 0.0, const StepHook& hook = {});

/// Column of `action` in the env's action set, or -1.
int action_column(std::span<const ActionId> actions, ActionId action);

}  // namespace skyfleet
