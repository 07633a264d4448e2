// skyfleet: command-line harness for the UAV fleet coverage simulator.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "skyfleet/errors.hpp"
#include "skyfleet/io.hpp"
#include "skyfleet/presets.hpp"
#include "skyfleet/render.hpp"
#include "skyfleet/runner.hpp"
#include "skyfleet/serve.hpp"

using namespace skyfleet;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

/// Where a scenario config comes from: exactly one of --case / --config.
struct Source {
  int case_id = 0;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string users_variant = "qlearning";

  void attach(CLI::App* cmd) {
    auto* c = cmd->add_option("--case", case_id, "Experiment preset 1-9")->check(CLI::Range(1, kPresetCount));
    auto* f = cmd->add_option("--config", config_path, "Scenario config JSON")->check(CLI::ExistingFile);
    c->excludes(f);
    f->excludes(c);
    cmd->add_option("--seed", seed, "Master seed (falls back to $SKYFLEET_SEED)");
    cmd->add_option("--users-variant", users_variant, "User count column of two-valued presets")
        ->check(CLI::IsMember({"qlearning", "sarsa"}));
  }

  ScenarioConfig resolve() const {
    std::optional<std::uint64_t> s = seed;
    if (!s) {
      if (const char* env = std::getenv("SKYFLEET_SEED"); env && *env) {
        try {
          s = std::stoull(env);
        } catch (const std::exception&) {
          throw CLI::ValidationError("SKYFLEET_SEED", fmt::format("not an unsigned integer: '{}'", env));
        }
      }
    }
    ScenarioConfig config;
    if (!config_path.empty()) {
      config = load_config(config_path);
      if (s) config.seed = *s;
    } else if (case_id != 0) {
      const auto variant = users_variant == "sarsa" ? UsersVariant::Sarsa : UsersVariant::QLearning;
      config = case_preset(case_id, s.value_or(0), variant);
    } else {
      throw CLI::RequiredError("one of --case or --config");
    }
    validate(config);
    return config;
  }
};

void print_final(const std::vector<QoEReport>& logs) {
  if (logs.empty()) return;
  const auto& r = logs.back();
  fmt::print("epoch {}: QoE1 {:.2f}% QoE2 {:.2f} it. QoE3 {:.2f}% crashes {}\n", r.epoch, r.qoe1_pct, r.qoe2_iters,
             r.qoe3_pct, r.crashes);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-UAV coverage simulator with tabular reinforcement learning"};
  app.require_subcommand(1);

  Source gen_src;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Generate a world and user population");
  gen_src.attach(gen);
  gen->add_option("--out", gen_out, "Output world JSON")->required();

  Source train_src;
  std::string algo = "qlearning";
  std::optional<int> train_epochs;
  std::string out_dir;
  auto* trn = app.add_subcommand("train", "Train agents (or run the baseline) and log QoE per epoch");
  train_src.attach(trn);
  trn->add_option("--algo", algo, "qlearning | sarsa | baseline")
      ->check(CLI::IsMember({"qlearning", "sarsa", "baseline"}));
  trn->add_option("--epochs", train_epochs, "Epochs (default: config training_epochs)")->check(CLI::PositiveNumber);
  trn->add_option("--out-dir", out_dir, "Output directory")->required();

  std::string eval_world, eval_qtables, eval_out, eval_trace;
  int eval_epochs = 100;
  bool greedy = false;
  auto* evl = app.add_subcommand("eval", "Evaluate frozen Q-tables on a saved world");
  evl->add_option("--world", eval_world, "World JSON")->required()->check(CLI::ExistingFile);
  evl->add_option("--qtables", eval_qtables, "Directory of qtable_agent<i>.json")->required()->check(CLI::ExistingDirectory);
  evl->add_option("--epochs", eval_epochs, "Evaluation epochs")->check(CLI::PositiveNumber);
  evl->add_flag("--greedy", greedy, "Pure greedy policy (epsilon 0)");
  evl->add_option("--out", eval_out, "CSV output (default: stdout)");
  evl->add_option("--trace", eval_trace, "Write a JSON-lines trace of every step");

  Source serve_src;
  auto* srv = app.add_subcommand("serve", "Line-delimited JSON environment session on stdin/stdout");
  serve_src.attach(srv);

  std::string rnd_world, rnd_trace, rnd_out;
  std::int64_t rnd_iter = 0;
  auto* rnd = app.add_subcommand("render", "SVG snapshot of one traced iteration");
  rnd->add_option("--world", rnd_world, "World JSON")->required()->check(CLI::ExistingFile);
  rnd->add_option("--trace", rnd_trace, "Trace JSON-lines")->required()->check(CLI::ExistingFile);
  rnd->add_option("--iter", rnd_iter, "Global iteration")->required()->check(CLI::NonNegativeNumber);
  rnd->add_option("--out", rnd_out, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) {
      const auto scenario = generate_scenario(gen_src.resolve());
      save_scenario(scenario, gen_out);
      fmt::print("wrote {} ({}x{} cells, {} users, {} clusters, {} stations)\n", gen_out, scenario.world.rows,
                 scenario.world.cols, scenario.users.size(), scenario.world.centroids.size(),
                 scenario.world.cs_cells.size());
    } else if (*trn) {
      const auto config = train_src.resolve();
      TrainRequest req;
      req.scenario = generate_scenario(config);
      req.algo = train_algo_from_string(algo);
      req.epochs = train_epochs.value_or(config.rl.training_epochs);
      req.out_dir = out_dir;
      print_final(run_train(req).logs);
    } else if (*evl) {
      const auto scenario = load_scenario(eval_world);
      const auto tables = load_qtables(eval_qtables, scenario.config.num_uavs);
      std::string trace;
      const auto logs = run_eval(scenario, tables, eval_epochs, greedy, eval_trace.empty() ? nullptr : &trace);
      const RunLabel label{greedy ? "greedy" : "eval", scenario.config.case_id, scenario.config.seed};
      if (eval_out.empty()) {
        std::cout << epoch_csv(logs, label);
      } else {
        write_epoch_csv(logs, label, eval_out);
        print_final(logs);
      }
      if (!eval_trace.empty()) write_text_file(eval_trace, trace);
    } else if (*srv) {
      ServeSession session(serve_src.resolve());
      return run_serve_loop(session);
    } else if (*rnd) {
      const auto scenario = load_scenario(rnd_world);
      const auto record = find_trace_record(read_text_file(rnd_trace), rnd_iter);
      write_text_file(rnd_out, render_svg(scenario, record));
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << "skyfleet: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "skyfleet: invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "skyfleet: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
