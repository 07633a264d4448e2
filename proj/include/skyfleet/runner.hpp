#pragma once

#include <string>
#include <vector>

#include "skyfleet/learn.hpp"
#include "skyfleet/metrics.hpp"
#include "skyfleet/scenario.hpp"

namespace skyfleet {

enum class TrainAlgo { QLearning, Sarsa, Baseline };

TrainAlgo train_algo_from_string(const std::string& name);
const char* to_string(TrainAlgo a);

struct TrainRequest {
  Scenario scenario;
  TrainAlgo algo = TrainAlgo::QLearning;
  int epochs = 0;
  std::string out_dir;
};

struct TrainSummary {
  std::vector<QoEReport> logs;
  std::vector<QTable> tables;
};

/// Trains (or runs the baseline) and writes qtable_agent<i>.json per agent,
/// world.json, metrics.csv and trace.jsonl (final epoch) into out_dir.
TrainSummary run_train(const TrainRequest& request);

/// Loads one table per UAV from `qtable_dir`; throws std::invalid_argument on
/// a dimension mismatch.
std::vector<QTable> load_qtables(const std::string& qtable_dir, int num_uavs);

/// Frozen-policy evaluation; epsilon 0 when `greedy`, otherwise the
/// configured final epsilon.
std::vector<QoEReport> run_eval(const Scenario& scenario, const std::vector<QTable>& tables, int epochs, bool greedy,
                                std::string* trace_jsonl = nullptr);

}  // namespace skyfleet
