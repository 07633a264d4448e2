#include "skyfleet/runner.hpp"

#include <filesystem>

#include <fmt/format.h>

#include "skyfleet/baseline.hpp"
#include "skyfleet/errors.hpp"
#include "skyfleet/io.hpp"

namespace skyfleet {

TrainAlgo train_algo_from_string(const std::string& name) {
  if (name == "qlearning") return TrainAlgo::QLearning;
  if (name == "sarsa") return TrainAlgo::Sarsa;
  if (name == "baseline") return TrainAlgo::Baseline;
  throw ConfigError("unknown algorithm '" + name + "'");
}

const char* to_string(TrainAlgo a) {
  switch (a) {
    case TrainAlgo::QLearning: return "qlearning";
    case TrainAlgo::Sarsa: return "sarsa";
    case TrainAlgo::Baseline: return "baseline";
  }
  return "qlearning";
}

TrainSummary run_train(const TrainRequest& req) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(req.out_dir, ec);
  if (ec) throw IoError(fmt::format("cannot create '{}': {}", req.out_dir, ec.message()));

  save_scenario(req.scenario, (fs::path(req.out_dir) / "world.json").string());

  std::string trace;
  const int last = req.epochs - 1;
  StepHook hook = [&](int epoch, const Env& env, const StepOutcome& out) {
    if (epoch == last) trace += trace_record(epoch, env, out).dump() + "\n";
  };

  const auto& config = req.scenario.config;
  TrainSummary summary;
  if (req.algo == TrainAlgo::Baseline) {
    summary.logs = run_baseline(req.scenario, req.epochs, hook);
  } else {
    const auto algo = req.algo == TrainAlgo::QLearning ? Algorithm::QLearning : Algorithm::Sarsa;
    auto result = train(req.scenario, algo, Hyperparams::from(config), req.epochs, hook);
    summary.logs = std::move(result.logs);
    summary.tables = std::move(result.tables);
    for (std::size_t i = 0; i < summary.tables.size(); ++i) {
      const QTableMeta meta{static_cast<int>(i), to_string(req.algo), config.case_id, config.seed};
      save_qtable(summary.tables[i], (fs::path(req.out_dir) / qtable_file_name(static_cast<int>(i))).string(), meta);
    }
  }

  const RunLabel label{to_string(req.algo), config.case_id, config.seed};
  if (!summary.logs.empty()) write_epoch_csv(summary.logs, label, (fs::path(req.out_dir) / "metrics.csv").string());
  write_text_file((fs::path(req.out_dir) / "trace.jsonl").string(), trace);
  return summary;
}

std::vector<QTable> load_qtables(const std::string& dir, int num_uavs) {
  std::vector<QTable> tables;
  for (int i = 0; i < num_uavs; ++i) {
    tables.push_back(load_qtable((std::filesystem::path(dir) / qtable_file_name(i)).string()));
  }
  return tables;
}

std::vector<QoEReport> run_eval(const Scenario& scenario, const std::vector<QTable>& tables, int epochs, bool greedy,
                                std::string* trace_jsonl) {
  StepHook hook;
  if (trace_jsonl) {
    hook = [&](int epoch, const Env& env, const StepOutcome& out) {
      *trace_jsonl += trace_record(epoch, env, out).dump() + "\n";
    };
  }
  const double epsilon = greedy ? 0.0 : scenario.config.rl.epsilon_end;
  return evaluate(scenario, tables, epochs, epsilon, hook);
}

}  // namespace skyfleet
